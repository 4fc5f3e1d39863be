#pragma once

#include <string>
#include <utility>

#include "ssw/types.hpp"

namespace ssw {

// Grayscale image held as real values (lossless from an 8-bit source).
// pixels(r, c) is row r, column c.
struct GrayImage {
  int width = 0;
  int height = 0;
  Matrix pixels;  // height x width
};

// Invertible mapping between an image and its row-wise-ordered patch
// vectors: rows*cols patches of patch_edge^2 pixels each, plus the global
// scalar mean subtracted during patchify.
struct PatchLayout {
  int patch_edge = 8;
  int rows = 0;
  int cols = 0;
  double global_mean = 0.0;
};

// Binary PGM ("P5", maxval <= 255). Header comments (#) are tolerated.
GrayImage read_pgm(const std::string& path);

// Writes 8-bit binary PGM; values are clamped to [0, 255] and rounded
// half-to-even.
void write_pgm(const GrayImage& img, const std::string& path);

// Splits into patch_edge x patch_edge blocks ordered row-wise, each block
// flattened row-major into one row of the output; subtracts the single
// global mean and records it in the layout. A pixel at (r, c) lands at
// row (r / e) * cols + (c / e), column (r % e) * e + (c % e).
std::pair<SignalMatrix, PatchLayout> patchify(const GrayImage& img,
                                              int patch_edge = 8);

// Exact inverse of patchify (before any write-time quantization).
GrayImage unpatchify(const SignalMatrix& mat, const PatchLayout& layout);

}  // namespace ssw
