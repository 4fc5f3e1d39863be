#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssw/gibbs.hpp"
#include "ssw/types.hpp"
#include "ssw/vb.hpp"

namespace ssw {

// P_e = (1/n) sum 1(b_i != b_hat_i), R_w = ||w - w_hat|| / ||w||, plus the
// flip-corrected diagnostics taken as the minimum over the (b, w) and
// (1-b, -w) labelings.
Metrics compute_metrics(const BitStream& truth_b, const Vector& truth_w,
                        const PosteriorSummary& summary);

// Context fields carried by the versioned summary JSON.
struct SummaryMeta {
  std::string solver;  // "mcmc" or "vb"
  Eigen::Index n = 0, d = 0;
  std::uint64_t seed = 0;
};

void export_summary(const std::string& path, const PosteriorSummary& summary,
                    const SummaryMeta& meta,
                    const std::optional<Metrics>& metrics = std::nullopt);

PosteriorSummary import_summary(const std::string& path,
                                SummaryMeta* meta = nullptr,
                                std::optional<Metrics>* metrics = nullptr);

// Plot-ready CSV exports. Headers:
//   wcoords:  index,w_true,w_hat,ci_lo,ci_hi   (w_true column only with truth)
//   elbo:     iter,elbo,delta_rel
//   chain:    iter,pi,log_joint,w_0..w_{d-1}
//   bit freq: i,b_freq
//   sweep:    dwr,p_e,r_w
void export_wcoords_csv(const std::string& path,
                        const PosteriorSummary& summary,
                        const Vector* truth_w = nullptr);
void export_elbo_csv(const std::string& path, const ElboTrace& trace);
void export_chain_csv(const std::string& path, const ChainTrace& trace);
void export_bit_freq_csv(const std::string& path, const ChainTrace& trace);

enum class Solver { kMcmc, kVb };

struct SweepPoint {
  double dwr_db = 0.0;
  Metrics metrics;
};

void export_sweep_csv(const std::string& path,
                      const std::vector<SweepPoint>& points);

struct SweepOptions {
  Solver solver = Solver::kVb;
  McmcConfig mcmc;
  VbConfig vb;
};

// DWR sweep protocol: one watermark direction is drawn outside and shared
// by every point; per point it is rescaled to the target DWR, embedded with
// the same bits, and attacked with hyperparameters initialized at that DWR.
std::vector<SweepPoint> dwr_sweep(const SignalMatrix& hosts,
                                  const Vector& w_direction,
                                  const BitStream& bits,
                                  const std::vector<double>& dwr_list,
                                  const SweepOptions& opts);

}  // namespace ssw
