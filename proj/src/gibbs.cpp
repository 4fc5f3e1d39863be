#include "ssw/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssw/dists.hpp"
#include "ssw/errors.hpp"
#include "ssw/parallel.hpp"

namespace ssw {

namespace {

constexpr double kLn2Pi = 1.8378770664093454835606594728112;

// Substream labels off the master seed.
constexpr std::uint64_t kChainStream = 0x6B1;
constexpr std::uint64_t kInitStream = 0x1217;
constexpr std::uint64_t kBitRootStream = 0xB17;

void validate(const McmcConfig& cfg) {
  if (cfg.total_iters < 1 || cfg.burn_in < 0 ||
      cfg.burn_in >= cfg.total_iters)
    throw InvalidParameter("mcmc config: need 0 <= burn_in < total_iters");
  if (cfg.thinning < 1) throw InvalidParameter("mcmc config: thinning >= 1");
  if (!(cfg.credible_level > 0.0 && cfg.credible_level < 1.0))
    throw InvalidParameter("mcmc config: credible_level in (0,1)");
}

// Type-7 (linear interpolation) percentile of an unsorted copy.
double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(i);
  return v[i] + (v[i + 1] - v[i]) * frac;
}

}  // namespace

NiwParams mu_sigma_conditional(const SignalMatrix& x, const Hyperparams& h) {
  const double n = static_cast<double>(x.rows());
  NiwParams p;
  if (x.rows() == 0) {  // pure prior
    p.mean = h.mu0;
    p.kappa = 1.0;
    p.dof = h.omega0;
    p.scale = h.sigma0;
    return p;
  }
  const Vector xbar = x.colwise().mean();
  const Vector diff = xbar - h.mu0;
  const Matrix centered = x.rowwise() - xbar.transpose();
  p.scale = symmetrized(h.sigma0 + (n / (n + 1.0)) * (diff * diff.transpose()) +
                        centered.transpose() * centered);
  p.mean = (h.mu0 + n * xbar) / (n + 1.0);
  p.kappa = n + 1.0;
  p.dof = h.omega0 + n;
  return p;
}

GaussianCanonical w_conditional(const SignalMatrix& y, const ModelState& s) {
  const Cholesky chol_v = Cholesky::compute(s.v);
  const Cholesky chol_sigma = Cholesky::compute(s.sigma);
  const Matrix v_inv = chol_v.inverse();
  const Matrix sigma_inv = chol_sigma.inverse();

  double n1 = 0.0;
  Vector residual_sum = Vector::Zero(y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    if (s.b[static_cast<std::size_t>(i)]) {
      n1 += 1.0;
      residual_sum += y.row(i).transpose();
    }
  residual_sum -= n1 * s.mu;

  const Matrix precision = symmetrized(v_inv + n1 * sigma_inv);
  const Vector rhs = v_inv * s.m + sigma_inv * residual_sum;

  GaussianCanonical g;
  g.prec_chol = Cholesky::compute(precision);
  g.mean = g.prec_chol.solve(rhs);
  return g;
}

Vector bit_probabilities(const SignalMatrix& y, const ModelState& s,
                         BitConditional rule, int threads) {
  const Eigen::Index n = y.rows();
  const double logit_prior = std::log(s.pi) - std::log1p(-s.pi);
  Vector probs(n);

  if (rule == BitConditional::kGivenW) {
    // ln N(y|mu+w,S) - ln N(y|mu,S) = w'S^{-1}(y - mu) - w'S^{-1}w / 2;
    // one solve against Sigma, then O(nd).
    const Cholesky chol = Cholesky::compute(s.sigma);
    const Vector t = chol.solve(s.w);
    const double offset = logit_prior - 0.5 * s.w.dot(t) - s.mu.dot(t);
    const Vector lin = y * t;
    parallel_chunks(n, threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
      for (std::ptrdiff_t i = lo; i < hi; ++i)
        probs[i] = logistic(lin[i] + offset);
    });
    return probs;
  }

  // kMarginalW: score with N(y | mu, Sigma) vs N(y | mu + m, Sigma + V).
  const Cholesky chol0 = Cholesky::compute(s.sigma);
  const Cholesky chol1 = Cholesky::compute(s.sigma + s.v);
  const double det_gap = 0.5 * (chol0.log_det() - chol1.log_det());

  // Quadratic forms for all rows at once; the per-column triangular solves
  // are independent, so chunking over rows is exact.
  Matrix r0 = (y.rowwise() - s.mu.transpose()).transpose();          // d x n
  Matrix r1 = (y.rowwise() - (s.mu + s.m).transpose()).transpose();  // d x n
  parallel_chunks(n, threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    const Matrix u0 = chol0.solve_lower(Matrix(r0.middleCols(lo, hi - lo)));
    const Matrix u1 = chol1.solve_lower(Matrix(r1.middleCols(lo, hi - lo)));
    for (std::ptrdiff_t i = lo; i < hi; ++i) {
      const double q0 = u0.col(i - lo).squaredNorm();
      const double q1 = u1.col(i - lo).squaredNorm();
      probs[i] = logistic(logit_prior + det_gap + 0.5 * (q0 - q1));
    }
  });
  return probs;
}

BetaParams pi_conditional(const BitStream& b, const Hyperparams& h) {
  double n1 = 0.0;
  for (auto bit : b) n1 += bit ? 1.0 : 0.0;
  return {h.a_pi + n1, h.b_pi + (static_cast<double>(b.size()) - n1)};
}

NiwParams m_v_conditional(const Vector& w, const Hyperparams& h) {
  const Vector diff = w - h.m0;
  NiwParams p;
  p.scale = symmetrized(h.v0 + 0.5 * (diff * diff.transpose()));
  p.mean = 0.5 * (h.m0 + w);
  p.kappa = 2.0;
  p.dof = h.omega0 + 1.0;
  return p;
}

std::pair<Vector, Matrix> sample_niw(const NiwParams& p, RngState& rng) {
  Matrix mat = invwishart_sample(p.dof, p.scale, rng);
  const Cholesky chol = Cholesky::compute(mat);
  Vector z(p.mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.next_gaussian();
  Vector loc = p.mean + chol.lower() * z / std::sqrt(p.kappa);
  return {std::move(loc), std::move(mat)};
}

Vector sample_gaussian_canonical(const GaussianCanonical& g, RngState& rng) {
  Vector z(g.mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.next_gaussian();
  // x = mean + L^{-T} z has covariance (L L')^{-1} = P^{-1}.
  return g.mean + g.prec_chol.lower().transpose().triangularView<Eigen::Upper>().solve(z);
}

double gaussian_canonical_logpdf(const Vector& x, const GaussianCanonical& g) {
  const double d = static_cast<double>(x.size());
  const Vector u = g.prec_chol.lower().transpose() * (x - g.mean);
  return 0.5 * g.prec_chol.log_det() - 0.5 * d * kLn2Pi -
         0.5 * u.squaredNorm();
}

BitStream draw_bits(const Vector& probs, const RngState& stream) {
  BitStream bits(static_cast<std::size_t>(probs.size()));
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    RngState sub = stream.split(static_cast<std::uint64_t>(i));
    bits[static_cast<std::size_t>(i)] = sub.next_unit() < probs[i] ? 1 : 0;
  }
  return bits;
}

SignalMatrix update_x(const SignalMatrix& y, const Vector& w,
                      const BitStream& b) {
  if (y.cols() != w.size() ||
      static_cast<std::size_t>(y.rows()) != b.size())
    throw DimensionMismatch("update_x: shape mismatch");
  SignalMatrix x = y;
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    if (b[static_cast<std::size_t>(i)]) x.row(i) -= w.transpose();
  return x;
}

BitStream update_b(const SignalMatrix& y, const ModelState& s,
                   const RngState& stream, BitConditional rule, int threads) {
  return draw_bits(bit_probabilities(y, s, rule, threads), stream);
}

double log_joint(const SignalMatrix& y, const ModelState& s,
                 const Hyperparams& h) {
  const double n = static_cast<double>(y.rows());
  const double d = static_cast<double>(y.cols());
  const Cholesky chol_sigma = Cholesky::compute(s.sigma);
  const Cholesky chol_v = Cholesky::compute(s.v);

  // sum_i ln N(x_i | mu, Sigma)
  const Matrix xc = (s.x.rowwise() - s.mu.transpose()).transpose();
  const double quad = chol_sigma.solve_lower(xc).squaredNorm();
  double lj = -0.5 * n * (d * kLn2Pi + chol_sigma.log_det()) - 0.5 * quad;

  // sum_i ln Bernoulli(b_i | pi)
  double n1 = 0.0;
  for (auto bit : s.b) n1 += bit ? 1.0 : 0.0;
  lj += n1 * std::log(s.pi) + (n - n1) * std::log1p(-s.pi);

  lj += mvn_logpdf(s.w, s.m, chol_v);                  // ln N(w | m, V)
  lj += mvn_logpdf(s.mu, h.mu0, chol_sigma);           // ln N(mu | mu0, Sigma)
  lj += invwishart_logpdf(s.sigma, h.omega0, h.sigma0);
  lj += mvn_logpdf(s.m, h.m0, chol_v);                 // ln N(m | m0, V)
  lj += invwishart_logpdf(s.v, h.omega0, h.v0);
  lj += beta_logpdf(s.pi, h.a_pi, h.b_pi);
  return lj;
}

ModelState init_state(const SignalMatrix& y, const Hyperparams& h,
                      const RngState& master) {
  ModelState s;
  s.pi = 0.5;
  s.mu = h.mu0;
  s.sigma = h.sigma0;
  s.m = h.m0;
  s.v = h.v0;
  s.w = Vector::Zero(y.cols());
  RngState init_rng = master.split(kInitStream);
  s.b.resize(static_cast<std::size_t>(y.rows()));
  for (auto& bit : s.b)
    bit = static_cast<std::uint8_t>(bernoulli_sample(0.5, init_rng));
  s.x = update_x(y, s.w, s.b);
  return s;
}

std::pair<ChainTrace, PosteriorSummary> run_gibbs(const SignalMatrix& y,
                                                  const Hyperparams& h,
                                                  const McmcConfig& cfg) {
  validate(cfg);
  const Eigen::Index n = y.rows();
  const Eigen::Index d = y.cols();
  validate_hyperparams(h, d);

  const RngState master(cfg.seed);
  RngState chain_rng = master.split(kChainStream);
  const RngState bit_root = master.split(kBitRootStream);

  ModelState s = init_state(y, h, master);

  const int kept_total = (cfg.total_iters - cfg.burn_in + cfg.thinning - 1) /
                         cfg.thinning;
  ChainTrace trace;
  trace.iters.reserve(static_cast<std::size_t>(kept_total));
  trace.w.resize(kept_total, d);
  trace.pi.reserve(static_cast<std::size_t>(kept_total));
  trace.log_joint.reserve(static_cast<std::size_t>(kept_total));
  trace.b_freq = Vector::Zero(n);

  int kept = 0;
  for (int t = 1; t <= cfg.total_iters; ++t) {
    const NiwParams ms = mu_sigma_conditional(s.x, h);
    std::tie(s.mu, s.sigma) = sample_niw(ms, chain_rng);

    const GaussianCanonical wc = w_conditional(y, s);
    s.w = sample_gaussian_canonical(wc, chain_rng);

    s.b = update_b(y, s, bit_root.split(static_cast<std::uint64_t>(t)),
                   cfg.bit_rule, cfg.threads);

    const BetaParams bp = pi_conditional(s.b, h);
    s.pi = beta_sample(bp.a, bp.b, chain_rng);

    const NiwParams mv = m_v_conditional(s.w, h);
    std::tie(s.m, s.v) = sample_niw(mv, chain_rng);

    s.x = update_x(y, s.w, s.b);

    const double lj = log_joint(y, s, h);
    if (!std::isfinite(lj))
      throw Error("run_gibbs: non-finite log joint at sweep " +
                  std::to_string(t));

    if (t > cfg.burn_in && (t - cfg.burn_in - 1) % cfg.thinning == 0) {
      trace.iters.push_back(t);
      trace.w.row(kept) = s.w.transpose();
      trace.pi.push_back(s.pi);
      trace.log_joint.push_back(lj);
      for (Eigen::Index i = 0; i < n; ++i)
        trace.b_freq[i] += s.b[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
      ++kept;
    }
  }
  trace.b_freq /= static_cast<double>(kept);

  PosteriorSummary out;
  out.w_hat = trace.w.topRows(kept).colwise().mean();
  out.ci_lo.resize(d);
  out.ci_hi.resize(d);
  const double lo_p = 0.5 * (1.0 - cfg.credible_level);
  const double hi_p = 0.5 * (1.0 + cfg.credible_level);
  for (Eigen::Index j = 0; j < d; ++j) {
    std::vector<double> col(trace.w.col(j).data(),
                            trace.w.col(j).data() + kept);
    out.ci_lo[j] = percentile(col, lo_p);
    out.ci_hi[j] = percentile(std::move(col), hi_p);
  }
  out.b_soft = trace.b_freq;
  out.b_hat.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    out.b_hat[static_cast<std::size_t>(i)] = trace.b_freq[i] > 0.5 ? 1 : 0;
  out.pi_hat = 0.0;
  for (double p : trace.pi) out.pi_hat += p;
  out.pi_hat /= static_cast<double>(trace.pi.size());
  out.diagnostics["kept"] = static_cast<double>(kept);
  out.diagnostics["final_log_joint"] = trace.log_joint.back();
  return {std::move(trace), std::move(out)};
}

}  // namespace ssw
