#pragma once

#include "ssw/types.hpp"

namespace ssw {

// Gate-additive embedding: row i becomes hosts_i + w when bits_i = 1 and is
// copied bit-identically otherwise.
SignalMatrix embed(const SignalMatrix& hosts, const Vector& w,
                   const BitStream& bits);

// Document-to-watermark ratio in dB: 10 log10(sigma_x^2 / sigma_w^2), with
// sigma_x^2 the population variance pooled over all n*d host elements and
// sigma_w^2 the population variance over the d watermark entries.
double measure_dwr(const SignalMatrix& hosts, const Vector& w);

// Rescale w so that measure_dwr(hosts, result) == target_dwr_db.
Vector scale_to_dwr(const SignalMatrix& hosts, const Vector& w,
                    double target_dwr_db);

struct DecoderConfig {
  double threshold = 0.5;
};

// Reference correlation decoder (knows w): per row, the detection statistic
// is the DC-removed correlation (y_i - mean(y_i) 1)' w / (w' w), so a
// brightness offset in the data cannot leak into the decision. This is a
// sanity baseline, not an optimal detector; it does not whiten against the
// host covariance and degrades toward chance at high DWR.
BitStream decode(const SignalMatrix& y, const Vector& w,
                 const DecoderConfig& cfg = {});

}  // namespace ssw
