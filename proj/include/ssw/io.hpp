#pragma once

#include <string>

#include "ssw/types.hpp"

namespace ssw {

// Headered binary matrix container: four 64-bit little-endian fields
// (magic "SSWMATRX", version = 1, n, d) followed by n*d IEEE doubles in
// row-major order. Fast at 16384 x 64 yet trivially inspectable.
void save_matrix(const std::string& path, const Matrix& m);
Matrix load_matrix(const std::string& path);

// Vectors travel as 1 x d matrices, bit streams as n x 1 matrices of 0/1.
void save_vector(const std::string& path, const Vector& v);
Vector load_vector(const std::string& path);
void save_bits(const std::string& path, const BitStream& bits);
BitStream load_bits(const std::string& path);

// Shortest-round-trip decimal rendering; every CSV cell goes through this
// so exported numbers re-parse bit-exactly.
std::string format_double(double v);

// Optional human-readable export of the binary container.
void write_matrix_csv(const std::string& path, const Matrix& m);

}  // namespace ssw
