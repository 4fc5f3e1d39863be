#include "ssw/datagen.hpp"

#include "ssw/codec.hpp"
#include "ssw/dists.hpp"
#include "ssw/errors.hpp"

namespace ssw {

namespace {

void validate(const SynthConfig& cfg) {
  if (cfg.n < 1 || cfg.d < 1)
    throw InvalidParameter("synth config: n and d must be >= 1");
  if (!(cfg.p_one >= 0.0 && cfg.p_one <= 1.0))
    throw InvalidParameter("synth config: p_one must be in [0,1]");
}

}  // namespace

SignalMatrix generate_hosts(const SynthConfig& cfg, const RngState& master) {
  validate(cfg);
  RngState rng = master.split(kHostStream);
  const Matrix eye = Matrix::Identity(cfg.d, cfg.d);
  const Matrix cov = invwishart_sample(cfg.d + 1.0, eye, rng);
  const Cholesky chol = Cholesky::compute(cov);
  const Vector zero = Vector::Zero(cfg.d);
  SignalMatrix hosts(cfg.n, cfg.d);
  for (int i = 0; i < cfg.n; ++i)
    hosts.row(i) = mvn_sample(zero, chol, rng).transpose();
  return hosts;
}

Vector generate_watermark(const SynthConfig& cfg, const SignalMatrix& hosts,
                          const RngState& master) {
  validate(cfg);
  RngState rng = master.split(kWatermarkStream);
  const Matrix eye = Matrix::Identity(cfg.d, cfg.d);
  const Matrix cov_mean = invwishart_sample(cfg.d + 1.0, eye, rng);
  const Vector mean_w = mvn_sample(Vector::Zero(cfg.d), cov_mean, rng);
  const Matrix cov_w = invwishart_sample(cfg.d + 1.0, eye, rng);
  Vector w = mvn_sample(mean_w, cov_w, rng);
  w.array() -= w.mean();
  return scale_to_dwr(hosts, w, cfg.dwr_db);
}

BitStream generate_bits(const SynthConfig& cfg, const RngState& master) {
  validate(cfg);
  RngState rng = master.split(kBitStream);
  BitStream bits(static_cast<std::size_t>(cfg.n));
  for (auto& b : bits)
    b = static_cast<std::uint8_t>(bernoulli_sample(cfg.p_one, rng));
  return bits;
}

}  // namespace ssw
