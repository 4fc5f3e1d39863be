#pragma once

#include "ssw/linalg.hpp"
#include "ssw/rng.hpp"

namespace ssw {

// ---------------------------------------------------------------------------
// Scalar special functions
// ---------------------------------------------------------------------------

// Digamma, accurate to 1e-10 for x > 0 (recurrence to x >= 10, then the
// asymptotic series through the x^-10 Bernoulli term).
double digamma(double x);

// ln of the multivariate gamma function Gamma_d(a).
double lgamma_multivariate(double a, int d);

double log_beta_fn(double a, double b);

// 1 / (1 + exp(-x)) with the argument clamped to +-700 to avoid overflow.
double logistic(double x);

// Inverse standard normal CDF (Acklam's rational approximation plus one
// Halley refinement; absolute error well below 1e-12).
double normal_quantile(double p);

// ---------------------------------------------------------------------------
// Samplers. All are pure functions of (parameters, RngState) and consume the
// stream in a fixed documented order.
// ---------------------------------------------------------------------------

// Unit-scale gamma via Marsaglia-Tsang; shape > 0.
double gamma_sample(double shape, RngState& rng);

double chi_squared_sample(double dof, RngState& rng);

// a, b > 0; drawn as Ga(a)/(Ga(a)+Ga(b)).
double beta_sample(double a, double b, RngState& rng);

// p in [0, 1]; returns 0/1.
int bernoulli_sample(double p, RngState& rng);

// mean + L z with z iid standard normal (d draws, coordinate order).
Vector mvn_sample(const Vector& mean, const Cholesky& cov_chol, RngState& rng);
Vector mvn_sample(const Vector& mean, const Matrix& cov, RngState& rng);

// Inverse Wishart with degrees of freedom `dof` > d-1 and SPD scale, via the
// Bartlett decomposition of the Wishart of the inverted scale. With
// L = chol(scale) and A the Bartlett factor (diagonal chi draws first, then
// strictly-lower normals in row-major order), the sample is Y'Y for
// Y = A^{-1} L'; no explicit matrix inverse is ever formed.
Matrix invwishart_sample(double dof, const Cholesky& scale_chol, RngState& rng);
Matrix invwishart_sample(double dof, const Matrix& scale, RngState& rng);

// ---------------------------------------------------------------------------
// Log densities
// ---------------------------------------------------------------------------

double mvn_logpdf(const Vector& x, const Vector& mean, const Cholesky& cov_chol);
double mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov);

double invwishart_logpdf(const Matrix& x, double dof, const Matrix& scale);

double beta_logpdf(double x, double a, double b);

// ---------------------------------------------------------------------------
// Closed-form moments of an inverse-Wishart factor IW(dof, scale):
//   <X^{-1}>  = dof * scale^{-1}
//   <ln|X|>   = ln|scale| - d ln 2 - sum_j digamma((dof + 1 - j) / 2)
// ---------------------------------------------------------------------------

struct IwMoments {
  Matrix mean_inverse;
  double mean_log_det;
};

IwMoments invwishart_moments(double dof, const Cholesky& scale_chol);

}  // namespace ssw
