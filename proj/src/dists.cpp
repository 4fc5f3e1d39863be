#include "ssw/dists.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ssw/errors.hpp"

namespace ssw {

namespace {
constexpr double kLn2Pi = 1.8378770664093454835606594728112;
}

// ---------------------------------------------------------------------------
// Scalar special functions
// ---------------------------------------------------------------------------

double digamma(double x) {
  if (!(x > 0.0))
    throw InvalidParameter("digamma: requires x > 0, got " + std::to_string(x));
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // ln x - 1/(2x) - sum of Bernoulli terms through x^-10; next omitted term
  // is ~2e-14 at x = 10.
  result += std::log(x) - 0.5 / x -
            inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 -
                            inv2 * (1.0 / 252.0 -
                                    inv2 * (1.0 / 240.0 - inv2 / 132.0))));
  return result;
}

double lgamma_multivariate(double a, int d) {
  double out = 0.25 * d * (d - 1) * std::log(std::numbers::pi);
  for (int j = 1; j <= d; ++j) out += std::lgamma(a + 0.5 * (1 - j));
  return out;
}

double log_beta_fn(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double logistic(double x) {
  x = std::clamp(x, -700.0, 700.0);
  return 1.0 / (1.0 + std::exp(-x));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidParameter("normal_quantile: p must be in (0,1)");
  // Acklam's piecewise rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF.
  const double e =
      0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

double gamma_sample(double shape, RngState& rng) {
  if (!(shape > 0.0))
    throw InvalidParameter("gamma_sample: shape must be > 0");
  if (shape < 1.0) {
    // Boost to shape+1 and scale back (Marsaglia-Tsang section 6).
    const double u = rng.next_unit();
    return gamma_sample(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_unit();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double chi_squared_sample(double dof, RngState& rng) {
  if (!(dof > 0.0)) throw InvalidParameter("chi_squared_sample: dof must be > 0");
  return 2.0 * gamma_sample(0.5 * dof, rng);
}

double beta_sample(double a, double b, RngState& rng) {
  if (!(a > 0.0) || !(b > 0.0))
    throw InvalidParameter("beta_sample: requires a > 0 and b > 0");
  const double x = gamma_sample(a, rng);
  const double y = gamma_sample(b, rng);
  return x / (x + y);
}

int bernoulli_sample(double p, RngState& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidParameter("bernoulli_sample: p must be in [0,1]");
  return rng.next_unit() < p ? 1 : 0;
}

Vector mvn_sample(const Vector& mean, const Cholesky& cov_chol, RngState& rng) {
  if (mean.size() != cov_chol.dim())
    throw DimensionMismatch("mvn_sample: mean/cov dimension mismatch");
  Vector z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.next_gaussian();
  return mean + cov_chol.lower() * z;
}

Vector mvn_sample(const Vector& mean, const Matrix& cov, RngState& rng) {
  return mvn_sample(mean, Cholesky::compute(cov), rng);
}

Matrix invwishart_sample(double dof, const Cholesky& scale_chol, RngState& rng) {
  const Eigen::Index d = scale_chol.dim();
  if (!(dof > static_cast<double>(d) - 1.0))
    throw InvalidDof("invwishart_sample: dof must exceed d - 1, got " +
                     std::to_string(dof));
  // Bartlett factor for Wishart(dof, I): diagonal first, then the strictly
  // lower triangle row by row (fixed stream order).
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    a(i, i) = std::sqrt(chi_squared_sample(dof - static_cast<double>(i), rng));
  for (Eigen::Index i = 1; i < d; ++i)
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = rng.next_gaussian();

  // W = U A A' U' ~ Wishart(dof, scale^{-1}) for U U' = scale^{-1}; the
  // inverse-Wishart draw W^{-1} reduces to Y'Y with Y = A^{-1} L' where
  // L = chol(scale).
  Matrix y = a.triangularView<Eigen::Lower>().solve(
      Matrix(scale_chol.lower().transpose()));
  return symmetrized(y.transpose() * y);
}

Matrix invwishart_sample(double dof, const Matrix& scale, RngState& rng) {
  return invwishart_sample(dof, Cholesky::compute(scale), rng);
}

// ---------------------------------------------------------------------------
// Log densities
// ---------------------------------------------------------------------------

double mvn_logpdf(const Vector& x, const Vector& mean, const Cholesky& cov_chol) {
  if (x.size() != mean.size() || x.size() != cov_chol.dim())
    throw DimensionMismatch("mvn_logpdf: dimension mismatch");
  const double d = static_cast<double>(x.size());
  return -0.5 * (d * kLn2Pi + cov_chol.log_det() + cov_chol.quad_form(x - mean));
}

double mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov) {
  return mvn_logpdf(x, mean, Cholesky::compute(cov));
}

double invwishart_logpdf(const Matrix& x, double dof, const Matrix& scale) {
  const int d = static_cast<int>(x.rows());
  if (!(dof > d - 1.0)) throw InvalidDof("invwishart_logpdf: dof must exceed d - 1");
  const Cholesky cx = Cholesky::compute(x);
  const Cholesky cs = Cholesky::compute(scale);
  const double tr_term = cx.solve(scale).trace();
  return 0.5 * dof * cs.log_det() - 0.5 * dof * d * std::numbers::ln2 -
         lgamma_multivariate(0.5 * dof, d) -
         0.5 * (dof + d + 1.0) * cx.log_det() - 0.5 * tr_term;
}

double beta_logpdf(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw InvalidParameter("beta_logpdf: requires a > 0 and b > 0");
  if (!(x > 0.0 && x < 1.0)) return -std::numeric_limits<double>::infinity();
  return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
         log_beta_fn(a, b);
}

IwMoments invwishart_moments(double dof, const Cholesky& scale_chol) {
  const int d = static_cast<int>(scale_chol.dim());
  IwMoments m;
  m.mean_inverse = dof * scale_chol.inverse();
  double psi_sum = 0.0;
  for (int j = 1; j <= d; ++j) psi_sum += digamma(0.5 * (dof + 1.0 - j));
  m.mean_log_det = scale_chol.log_det() - d * std::numbers::ln2 - psi_sum;
  return m;
}

}  // namespace ssw
