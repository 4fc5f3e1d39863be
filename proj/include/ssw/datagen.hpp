#pragma once

#include "ssw/rng.hpp"
#include "ssw/types.hpp"

namespace ssw {

struct SynthConfig {
  int n = 4096;
  int d = 64;
  double dwr_db = 30.0;
  std::uint64_t seed = 0;
  double p_one = 0.5;
};

// Substream labels off the master seed. Hosts, watermark and bits each draw
// from their own split, so changing n never perturbs the watermark draw.
inline constexpr std::uint64_t kHostStream = 1;
inline constexpr std::uint64_t kWatermarkStream = 2;
inline constexpr std::uint64_t kBitStream = 3;

// One covariance draw Sigma* ~ IW(d+1, I) shared by all rows, then n iid
// rows x_i ~ N(0, Sigma*). The single shared draw is what gives the host
// signal its structure.
SignalMatrix generate_hosts(const SynthConfig& cfg, const RngState& master);

// Watermark draw, consuming its substream in this fixed order:
//   1. Sigma_a ~ IW(d+1, I)      (covariance of the random mean)
//   2. mean_w  ~ N(0, Sigma_a)
//   3. Sigma_b ~ IW(d+1, I)      (covariance of the watermark itself)
//   4. w       ~ N(mean_w, Sigma_b)
// then w is shifted to zero empirical mean and rescaled to cfg.dwr_db
// against the supplied hosts. (The mean draw is observationally irrelevant
// after the zero-mean shift but is kept for stream-trace fidelity.)
Vector generate_watermark(const SynthConfig& cfg, const SignalMatrix& hosts,
                          const RngState& master);

// n iid Bernoulli(p_one) message bits.
BitStream generate_bits(const SynthConfig& cfg, const RngState& master);

}  // namespace ssw
