#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ssw/linalg.hpp"

namespace ssw {

// n x d matrix whose rows are data points (hosts, watermarked data, or
// residuals).
using SignalMatrix = Eigen::MatrixXd;

// Hidden per-datapoint indicators; length n.
using BitStream = std::vector<std::uint8_t>;

// Point estimates and uncertainty produced by either solver.
struct PosteriorSummary {
  Vector w_hat;            // estimated watermark, length d
  Vector ci_lo, ci_hi;     // per-coordinate credible interval bounds
  BitStream b_hat;         // hard bit decisions
  Vector b_soft;           // per-bit posterior frequency / mean in [0,1]
  double pi_hat = 0.0;     // posterior estimate of the embedding rate
  std::map<std::string, double> diagnostics;  // solver-specific scalars
};

struct Metrics {
  double p_e = 0.0;       // bit error fraction
  double r_w = 0.0;       // ||w - w_hat|| / ||w||
  double p_e_flip = 0.0;  // min over the (b, w) vs (1-b, -w) labelings
  double r_w_flip = 0.0;
};

}  // namespace ssw
