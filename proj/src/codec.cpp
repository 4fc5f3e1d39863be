#include "ssw/codec.hpp"

#include <cmath>

#include "ssw/errors.hpp"

namespace ssw {

namespace {

// Population (1/N) variance of every element of a matrix.
double element_variance(const Eigen::Ref<const Matrix>& m) {
  const double mean = m.mean();
  return (m.array() - mean).square().sum() / static_cast<double>(m.size());
}

}  // namespace

SignalMatrix embed(const SignalMatrix& hosts, const Vector& w,
                   const BitStream& bits) {
  if (hosts.cols() != w.size())
    throw DimensionMismatch("embed: watermark dimension != host dimension");
  if (static_cast<std::size_t>(hosts.rows()) != bits.size())
    throw DimensionMismatch("embed: bit stream length != number of rows");
  SignalMatrix y = hosts;
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    if (bits[static_cast<std::size_t>(i)]) y.row(i) += w.transpose();
  return y;
}

double measure_dwr(const SignalMatrix& hosts, const Vector& w) {
  const double var_w = element_variance(w);
  if (var_w <= 0.0)
    throw ZeroWatermark("measure_dwr: watermark has zero element variance");
  const double var_x = element_variance(hosts);
  return 10.0 * std::log10(var_x / var_w);
}

Vector scale_to_dwr(const SignalMatrix& hosts, const Vector& w,
                    double target_dwr_db) {
  const double var_w = element_variance(w);
  if (var_w <= 0.0)
    throw ZeroWatermark("scale_to_dwr: watermark has zero element variance");
  const double var_x = element_variance(hosts);
  const double c = std::sqrt(var_x / (var_w * std::pow(10.0, target_dwr_db / 10.0)));
  return c * w;
}

BitStream decode(const SignalMatrix& y, const Vector& w,
                 const DecoderConfig& cfg) {
  if (y.cols() != w.size())
    throw DimensionMismatch("decode: watermark dimension != data dimension");
  const double ww = w.squaredNorm();
  if (ww <= 0.0) throw ZeroWatermark("decode: zero watermark");
  BitStream bits(static_cast<std::size_t>(y.rows()));
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const double dc = y.row(i).mean();
    const double f = (y.row(i).transpose().array() - dc).matrix().dot(w) / ww;
    bits[static_cast<std::size_t>(i)] = f > cfg.threshold ? 1 : 0;
  }
  return bits;
}

}  // namespace ssw
