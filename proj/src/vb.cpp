#include "ssw/vb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ssw/dists.hpp"
#include "ssw/errors.hpp"
#include "ssw/parallel.hpp"

namespace ssw {

namespace {

constexpr double kLn2Pi = 1.8378770664093454835606594728112;
constexpr std::uint64_t kVbInitStream = 0x7B;

double bernoulli_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  const double q = 1.0 - p;
  if (q > 0.0) h -= q * std::log(q);
  return h;
}

// E[ln q] of a normal-inverse-Wishart factor
// N(loc | mean, Mat/kappa) IW(Mat | nu, Psi), using <ln|Mat|> and
// tr(Psi <Mat^{-1}>) = nu * d.
double niw_neg_entropy(double kappa, double nu, double scale_log_det,
                       double mat_log_det_mean, int d) {
  const double dd = static_cast<double>(d);
  const double e_ln_q_loc = -0.5 * dd * kLn2Pi + 0.5 * dd * std::log(kappa) -
                            0.5 * mat_log_det_mean - 0.5 * dd;
  const double e_ln_q_mat =
      0.5 * nu * scale_log_det - 0.5 * nu * dd * std::numbers::ln2 -
      lgamma_multivariate(0.5 * nu, d) -
      0.5 * (nu + dd + 1.0) * mat_log_det_mean - 0.5 * nu * dd;
  return e_ln_q_loc + e_ln_q_mat;
}

// Refresh <Sigma^{-1}>, <ln|Sigma|> (or the V analogs) from the factor's
// (nu, scale).
void refresh_iw_cache(double nu, const Matrix& scale, Matrix& inv_mean,
                      double& log_det_mean, double& scale_log_det) {
  const Cholesky chol = Cholesky::compute(scale);
  const IwMoments m = invwishart_moments(nu, chol);
  inv_mean = m.mean_inverse;
  log_det_mean = m.mean_log_det;
  scale_log_det = chol.log_det();
}

void refresh_pi_cache(VbState& s) {
  const double psi_ab = digamma(s.a_pi + s.b_pi);
  s.ln_pi_mean = digamma(s.a_pi) - psi_ab;
  s.ln_one_minus_pi_mean = digamma(s.b_pi) - psi_ab;
}

}  // namespace

VbState vb_init(const SignalMatrix& y, const Hyperparams& h,
                const VbConfig& cfg) {
  const Eigen::Index n = y.rows();
  VbState s;

  s.mu_mean = h.mu0;
  s.kappa_mu = 1.0;
  s.nu_sigma = h.omega0;
  s.sigma_scale = h.sigma0;
  refresh_iw_cache(s.nu_sigma, s.sigma_scale, s.sigma_inv_mean,
                   s.sigma_log_det_mean, s.sigma_scale_log_det);

  s.m_mean = h.m0;
  s.kappa_m = 1.0;
  s.nu_v = h.omega0;
  s.v_scale = h.v0;
  refresh_iw_cache(s.nu_v, s.v_scale, s.v_inv_mean, s.v_log_det_mean,
                   s.v_scale_log_det);

  // q(w) starts at N(m0, <V^{-1}>^{-1}).
  s.w_mean = h.m0;
  s.w_cov = Cholesky::compute(s.v_inv_mean).inverse();
  s.w_second = symmetrized(s.w_cov + s.w_mean * s.w_mean.transpose());

  s.a_pi = h.a_pi;
  s.b_pi = h.b_pi;
  refresh_pi_cache(s);

  RngState rng = RngState(cfg.seed).split(kVbInitStream);
  s.b_mean.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    s.b_mean[i] = 0.5 + 0.01 * (2.0 * rng.next_unit() - 1.0);
  return s;
}

void vb_update_mu_sigma(const SignalMatrix& y, VbState& s,
                        const Hyperparams& h) {
  const double n = static_cast<double>(y.rows());

  // Expected residuals xhat_i = y_i - <b_i><w> plus the covariance of b_i w,
  // Cov(b_i w) = <b_i> Cov(w) + <b_i>(1-<b_i>) <w><w>'.
  const Matrix xhat = y - s.b_mean * s.w_mean.transpose();
  const Vector xbar = xhat.colwise().mean();
  const Vector diff = xbar - h.mu0;
  const Matrix centered = xhat.rowwise() - xbar.transpose();
  const double sum_b = s.b_mean.sum();
  const double sum_var = (s.b_mean.array() * (1.0 - s.b_mean.array())).sum();

  s.sigma_scale = symmetrized(
      h.sigma0 + (n / (n + 1.0)) * (diff * diff.transpose()) +
      centered.transpose() * centered + sum_b * s.w_cov +
      sum_var * (s.w_mean * s.w_mean.transpose()));
  s.mu_mean = (h.mu0 + n * xbar) / (n + 1.0);
  s.kappa_mu = n + 1.0;
  s.nu_sigma = h.omega0 + n;
  refresh_iw_cache(s.nu_sigma, s.sigma_scale, s.sigma_inv_mean,
                   s.sigma_log_det_mean, s.sigma_scale_log_det);
}

void vb_update_w(const SignalMatrix& y, VbState& s, const Hyperparams& h,
                 WPrecisionRule rule) {
  (void)h;
  const double sum_b = s.b_mean.sum();
  const double sum_var = (s.b_mean.array() * (1.0 - s.b_mean.array())).sum();
  const double coeff = rule == WPrecisionRule::kSecondMoment
                           ? sum_b
                           : sum_b + sum_var;

  const Matrix precision = symmetrized(s.v_inv_mean + coeff * s.sigma_inv_mean);
  const Vector weighted_residual =
      y.transpose() * s.b_mean - sum_b * s.mu_mean;
  const Vector rhs =
      s.v_inv_mean * s.m_mean + s.sigma_inv_mean * weighted_residual;

  const Cholesky chol = Cholesky::compute(precision);
  s.w_mean = chol.solve(rhs);
  s.w_cov = chol.inverse();
  s.w_second = symmetrized(s.w_cov + s.w_mean * s.w_mean.transpose());
}

void vb_update_b(const SignalMatrix& y, VbState& s, BitUpdateRule rule,
                 int threads) {
  const Eigen::Index n = y.rows();
  const double prior_gap = s.ln_pi_mean - s.ln_one_minus_pi_mean;

  if (rule == BitUpdateRule::kMeanField) {
    // logit_i = <ln pi> - <ln(1-pi)> + <w>'<Sigma^{-1}>(y_i - <mu>)
    //           - tr(<Sigma^{-1}><ww'>)/2
    const Vector t = s.sigma_inv_mean * s.w_mean;
    const double offset = prior_gap - s.mu_mean.dot(t) -
                          0.5 * s.sigma_inv_mean.cwiseProduct(s.w_second).sum();
    const Vector lin = y * t;
    for (Eigen::Index i = 0; i < n; ++i)
      s.b_mean[i] = logistic(lin[i] + offset);
    return;
  }

  // Plug-in variant: densities N(y | <mu>, S) vs N(y | <mu>+<m>, S + U)
  // with S = <Sigma^{-1}>^{-1}, U = <V^{-1}>^{-1}.
  const Matrix s_cov = Cholesky::compute(s.sigma_inv_mean).inverse();
  const Matrix u_cov = Cholesky::compute(s.v_inv_mean).inverse();
  const Cholesky chol0 = Cholesky::compute(s_cov);
  const Cholesky chol1 = Cholesky::compute(s_cov + u_cov);
  const double det_gap = 0.5 * (chol0.log_det() - chol1.log_det());
  Matrix r0 = (y.rowwise() - s.mu_mean.transpose()).transpose();
  Matrix r1 = (y.rowwise() - (s.mu_mean + s.m_mean).transpose()).transpose();
  parallel_chunks(n, threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    const Matrix u0 = chol0.solve_lower(Matrix(r0.middleCols(lo, hi - lo)));
    const Matrix u1 = chol1.solve_lower(Matrix(r1.middleCols(lo, hi - lo)));
    for (std::ptrdiff_t i = lo; i < hi; ++i) {
      const double q0 = u0.col(i - lo).squaredNorm();
      const double q1 = u1.col(i - lo).squaredNorm();
      s.b_mean[i] = logistic(prior_gap + det_gap + 0.5 * (q0 - q1));
    }
  });
}

void vb_update_pi(VbState& s, const Hyperparams& h) {
  const double n = static_cast<double>(s.b_mean.size());
  const double sum_b = s.b_mean.sum();
  s.a_pi = h.a_pi + sum_b;
  s.b_pi = h.b_pi + n - sum_b;
  refresh_pi_cache(s);
}

void vb_update_m_v(VbState& s, const Hyperparams& h, MvScaleRule rule) {
  const Vector diff = s.w_mean - h.m0;
  Matrix scale = h.v0 + 0.5 * (diff * diff.transpose());
  if (rule == MvScaleRule::kFullSecondMoment) scale += s.w_cov;
  s.v_scale = symmetrized(scale);
  s.m_mean = 0.5 * (h.m0 + s.w_mean);
  s.kappa_m = 2.0;
  s.nu_v = h.omega0 + 1.0;
  refresh_iw_cache(s.nu_v, s.v_scale, s.v_inv_mean, s.v_log_det_mean,
                   s.v_scale_log_det);
}

double compute_elbo(const SignalMatrix& y, const VbState& s,
                    const Hyperparams& h) {
  const double n = static_cast<double>(y.rows());
  const int d = static_cast<int>(y.cols());
  const double dd = static_cast<double>(d);

  const double sum_b = s.b_mean.sum();
  const double sum_var = (s.b_mean.array() * (1.0 - s.b_mean.array())).sum();

  // --- E_q[ln p(y | x-model)]: sum_i E[ln N(y_i - b_i w | mu, Sigma)].
  // Quadratic part: (y_i - <b_i><w> - <mu>)' <S^{-1}> (...) plus the
  // b_i w covariance traces plus d/kappa_mu from the q(mu | Sigma) spread.
  const Matrix resid =
      (y - s.b_mean * s.w_mean.transpose()).rowwise() - s.mu_mean.transpose();
  const double quad = (resid * s.sigma_inv_mean).cwiseProduct(resid).sum();
  const double cov_trace =
      sum_b * s.sigma_inv_mean.cwiseProduct(s.w_cov).sum() +
      sum_var * s.w_mean.dot(s.sigma_inv_mean * s.w_mean);
  const double t_like =
      -0.5 * n * (dd * kLn2Pi + s.sigma_log_det_mean) -
      0.5 * (quad + cov_trace + n * dd / s.kappa_mu);

  // --- E_q[ln Bernoulli(b_i | pi)].
  const double t_bits = sum_b * s.ln_pi_mean +
                        (n - sum_b) * s.ln_one_minus_pi_mean;

  // --- E_q[ln N(w | m, V)].
  const Vector wm = s.w_mean - s.m_mean;
  const double t_w_prior =
      -0.5 * (dd * kLn2Pi + s.v_log_det_mean) -
      0.5 * (wm.dot(s.v_inv_mean * wm) +
             s.v_inv_mean.cwiseProduct(s.w_cov).sum() + dd / s.kappa_m);

  // --- E_q[ln N(mu | mu0, Sigma)].
  const Vector md = s.mu_mean - h.mu0;
  const double t_mu_prior =
      -0.5 * (dd * kLn2Pi + s.sigma_log_det_mean) -
      0.5 * (md.dot(s.sigma_inv_mean * md) + dd / s.kappa_mu);

  // --- E_q[ln IW(Sigma | omega0, Sigma0)] and E_q[ln IW(V | omega0, V0)].
  const double sigma0_log_det = Cholesky::compute(h.sigma0).log_det();
  const double v0_log_det = Cholesky::compute(h.v0).log_det();
  const double lgam = lgamma_multivariate(0.5 * h.omega0, d);
  const double t_sigma_prior =
      0.5 * h.omega0 * sigma0_log_det -
      0.5 * h.omega0 * dd * std::numbers::ln2 - lgam -
      0.5 * (h.omega0 + dd + 1.0) * s.sigma_log_det_mean -
      0.5 * h.sigma0.cwiseProduct(s.sigma_inv_mean).sum();
  const double t_v_prior =
      0.5 * h.omega0 * v0_log_det - 0.5 * h.omega0 * dd * std::numbers::ln2 -
      lgam - 0.5 * (h.omega0 + dd + 1.0) * s.v_log_det_mean -
      0.5 * h.v0.cwiseProduct(s.v_inv_mean).sum();

  // --- E_q[ln N(m | m0, V)].
  const Vector mm = s.m_mean - h.m0;
  const double t_m_prior =
      -0.5 * (dd * kLn2Pi + s.v_log_det_mean) -
      0.5 * (mm.dot(s.v_inv_mean * mm) + dd / s.kappa_m);

  // --- E_q[ln Beta(pi | a_pi, b_pi)].
  const double t_pi_prior = -log_beta_fn(h.a_pi, h.b_pi) +
                            (h.a_pi - 1.0) * s.ln_pi_mean +
                            (h.b_pi - 1.0) * s.ln_one_minus_pi_mean;

  // --- Entropy block: -E_q[ln q] for every factor.
  const double h_mu_sigma =
      -niw_neg_entropy(s.kappa_mu, s.nu_sigma, s.sigma_scale_log_det,
                       s.sigma_log_det_mean, d);
  const double h_m_v = -niw_neg_entropy(s.kappa_m, s.nu_v, s.v_scale_log_det,
                                        s.v_log_det_mean, d);
  const double h_w =
      0.5 * dd * (1.0 + kLn2Pi) + 0.5 * Cholesky::compute(s.w_cov).log_det();
  double h_bits = 0.0;
  for (Eigen::Index i = 0; i < s.b_mean.size(); ++i)
    h_bits += bernoulli_entropy(s.b_mean[i]);
  const double h_pi = log_beta_fn(s.a_pi, s.b_pi) -
                      (s.a_pi - 1.0) * digamma(s.a_pi) -
                      (s.b_pi - 1.0) * digamma(s.b_pi) +
                      (s.a_pi + s.b_pi - 2.0) * digamma(s.a_pi + s.b_pi);

  const double elbo = t_like + t_bits + t_w_prior + t_mu_prior +
                      t_sigma_prior + t_v_prior + t_m_prior + t_pi_prior +
                      h_mu_sigma + h_m_v + h_w + h_bits + h_pi;
  if (!std::isfinite(elbo))
    throw NonFiniteElbo("compute_elbo: bound is not finite");
  return elbo;
}

std::pair<ElboTrace, PosteriorSummary> run_vb(const SignalMatrix& y,
                                              const Hyperparams& h,
                                              const VbConfig& cfg) {
  if (cfg.max_iters < 1)
    throw InvalidParameter("vb config: max_iters must be >= 1");
  if (!(cfg.credible_level > 0.0 && cfg.credible_level < 1.0))
    throw InvalidParameter("vb config: credible_level in (0,1)");
  validate_hyperparams(h, y.cols());

  VbState s = vb_init(y, h, cfg);

  ElboTrace trace;
  trace.elbo.push_back(compute_elbo(y, s, h));
  trace.delta_rel.push_back(0.0);

  for (int t = 1; t <= cfg.max_iters; ++t) {
    vb_update_mu_sigma(y, s, h);
    vb_update_w(y, s, h, cfg.w_rule);
    vb_update_b(y, s, cfg.b_rule, cfg.threads);
    vb_update_pi(s, h);
    vb_update_m_v(s, h, cfg.mv_rule);

    const double elbo = compute_elbo(y, s, h);
    const double prev = trace.elbo.back();
    const double rel =
        std::abs(elbo - prev) / std::max(1.0, std::abs(elbo));
    trace.elbo.push_back(elbo);
    trace.delta_rel.push_back(rel);
    trace.sweeps = t;
    if (rel < cfg.elbo_rel_tol) {
      trace.converged = true;
      break;
    }
  }

  PosteriorSummary out;
  out.w_hat = s.w_mean;
  const double z = normal_quantile(0.5 * (1.0 + cfg.credible_level));
  const Vector sd = s.w_cov.diagonal().array().sqrt();
  out.ci_lo = s.w_mean - z * sd;
  out.ci_hi = s.w_mean + z * sd;
  out.b_soft = s.b_mean;
  out.b_hat.resize(static_cast<std::size_t>(s.b_mean.size()));
  for (Eigen::Index i = 0; i < s.b_mean.size(); ++i)
    out.b_hat[static_cast<std::size_t>(i)] = s.b_mean[i] > 0.5 ? 1 : 0;
  out.pi_hat = s.a_pi / (s.a_pi + s.b_pi);
  out.diagnostics["sweeps"] = static_cast<double>(trace.sweeps);
  out.diagnostics["converged"] = trace.converged ? 1.0 : 0.0;
  out.diagnostics["final_elbo"] = trace.elbo.back();
  return {std::move(trace), std::move(out)};
}

}  // namespace ssw
