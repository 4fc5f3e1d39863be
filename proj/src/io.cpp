#include "ssw/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>

#include "ssw/errors.hpp"

namespace ssw {

namespace {

constexpr std::uint64_t kMagic = 0x58525441'4D575353ull;  // "SSWMATRX" LE
constexpr std::uint64_t kVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

std::uint64_t get_u64(std::istream& in, const std::string& path) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (in.gcount() != 8)
    throw TruncatedData("matrix: truncated header in " + path);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

}  // namespace

void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("matrix: cannot open " + path + " for writing");
  put_u64(out, kMagic);
  put_u64(out, kVersion);
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      put_u64(out, std::bit_cast<std::uint64_t>(m(i, j)));
  if (!out) throw IoError("matrix: short write to " + path);
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("matrix: cannot open " + path);
  if (get_u64(in, path) != kMagic)
    throw MalformedHeader("matrix: bad magic in " + path);
  const std::uint64_t version = get_u64(in, path);
  if (version != kVersion)
    throw MalformedHeader("matrix: unsupported version " +
                          std::to_string(version) + " in " + path);
  const auto n = static_cast<Eigen::Index>(get_u64(in, path));
  const auto d = static_cast<Eigen::Index>(get_u64(in, path));
  if (n < 0 || d < 0 || (n > 0 && d > (1 << 26) / 1))
    throw MalformedHeader("matrix: implausible shape in " + path);
  Matrix m(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      m(i, j) = std::bit_cast<double>(get_u64(in, path));
  return m;
}

void save_vector(const std::string& path, const Vector& v) {
  save_matrix(path, Matrix(v.transpose()));
}

Vector load_vector(const std::string& path) {
  const Matrix m = load_matrix(path);
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.cols() == 1) return m.col(0);
  throw LayoutMismatch("vector: " + path + " is not a single row or column");
}

void save_bits(const std::string& path, const BitStream& bits) {
  Matrix m(static_cast<Eigen::Index>(bits.size()), 1);
  for (std::size_t i = 0; i < bits.size(); ++i)
    m(static_cast<Eigen::Index>(i), 0) = bits[i] ? 1.0 : 0.0;
  save_matrix(path, m);
}

BitStream load_bits(const std::string& path) {
  const Matrix m = load_matrix(path);
  if (m.cols() != 1)
    throw LayoutMismatch("bits: " + path + " is not a single column");
  BitStream bits(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double v = m(i, 0);
    if (v != 0.0 && v != 1.0)
      throw LayoutMismatch("bits: non-binary value in " + path);
    bits[static_cast<std::size_t>(i)] = v == 1.0 ? 1 : 0;
  }
  return bits;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("csv: cannot open " + path + " for writing");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("csv: short write to " + path);
}

}  // namespace ssw
