#include "ssw/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <vector>

#include "ssw/errors.hpp"

namespace ssw {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int parse_positive_int(const std::string& tok, const char* what) {
  if (tok.empty()) throw MalformedHeader(std::string("pgm: missing ") + what);
  int value = 0;
  for (char c : tok) {
    if (c < '0' || c > '9')
      throw MalformedHeader(std::string("pgm: non-numeric ") + what);
    value = value * 10 + (c - '0');
    if (value > 1 << 30) throw MalformedHeader(std::string("pgm: huge ") + what);
  }
  if (value <= 0) throw MalformedHeader(std::string("pgm: non-positive ") + what);
  return value;
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("pgm: cannot open " + path);

  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5')
    throw MalformedHeader("pgm: expected binary magic P5 in " + path);

  const int width = parse_positive_int(next_token(in), "width");
  const int height = parse_positive_int(next_token(in), "height");
  const int maxval = parse_positive_int(next_token(in), "maxval");
  if (maxval > 255)
    throw UnsupportedMaxval("pgm: maxval " + std::to_string(maxval) +
                            " > 255 not supported");
  // Exactly one whitespace byte separates the header from the raster; the
  // token scanner has already consumed it.

  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw TruncatedData("pgm: raster shorter than width*height in " + path);

  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(height, width);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      img.pixels(r, c) =
          static_cast<double>(raw[static_cast<std::size_t>(r) * width + c]);
  return img;
}

void write_pgm(const GrayImage& img, const std::string& path) {
  if (img.pixels.rows() != img.height || img.pixels.cols() != img.width)
    throw LayoutMismatch("pgm: pixel buffer does not match declared size");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("pgm: cannot open " + path + " for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> raw(static_cast<std::size_t>(img.width) *
                                 img.height);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      double v = img.pixels(r, c);
      v = std::clamp(v, 0.0, 255.0);
      // nearbyint rounds half-to-even in the default rounding mode.
      raw[static_cast<std::size_t>(r) * img.width + c] =
          static_cast<unsigned char>(std::nearbyint(v));
    }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("pgm: short write to " + path);
}

std::pair<SignalMatrix, PatchLayout> patchify(const GrayImage& img,
                                              int patch_edge) {
  if (patch_edge < 1) throw InvalidParameter("patchify: patch_edge must be >= 1");
  if (img.height % patch_edge != 0 || img.width % patch_edge != 0)
    throw IndivisibleDimensions(
        "patchify: image dimensions must be divisible by the patch edge");

  PatchLayout layout;
  layout.patch_edge = patch_edge;
  layout.rows = img.height / patch_edge;
  layout.cols = img.width / patch_edge;
  // Quantize the stored mean to a multiple of 2^-44: for 8-bit pixel values
  // both (p - mean) and its re-addition are then exact, so the
  // patchify/unpatchify round-trip is bitwise lossless.
  layout.global_mean = std::nearbyint(img.pixels.mean() * 0x1p44) * 0x1p-44;

  const int n = layout.rows * layout.cols;
  const int d = patch_edge * patch_edge;
  SignalMatrix mat(n, d);
  for (int pr = 0; pr < layout.rows; ++pr)
    for (int pc = 0; pc < layout.cols; ++pc) {
      const int row = pr * layout.cols + pc;
      for (int r = 0; r < patch_edge; ++r)
        for (int c = 0; c < patch_edge; ++c)
          mat(row, r * patch_edge + c) =
              img.pixels(pr * patch_edge + r, pc * patch_edge + c) -
              layout.global_mean;
    }
  return {mat, layout};
}

GrayImage unpatchify(const SignalMatrix& mat, const PatchLayout& layout) {
  const int e = layout.patch_edge;
  if (mat.rows() != static_cast<Eigen::Index>(layout.rows) * layout.cols ||
      mat.cols() != static_cast<Eigen::Index>(e) * e)
    throw LayoutMismatch("unpatchify: matrix shape does not match layout");

  GrayImage img;
  img.height = layout.rows * e;
  img.width = layout.cols * e;
  img.pixels.resize(img.height, img.width);
  for (int pr = 0; pr < layout.rows; ++pr)
    for (int pc = 0; pc < layout.cols; ++pc) {
      const int row = pr * layout.cols + pc;
      for (int r = 0; r < e; ++r)
        for (int c = 0; c < e; ++c)
          img.pixels(pr * e + r, pc * e + c) =
              mat(row, r * e + c) + layout.global_mean;
    }
  return img;
}

}  // namespace ssw
