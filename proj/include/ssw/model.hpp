#pragma once

#include "ssw/types.hpp"

namespace ssw {

// Fixed prior parameters of the attack model:
//   x_i ~ N(mu, Sigma)          mu | Sigma ~ N(mu0, Sigma)   Sigma ~ IW(omega0, Sigma0)
//   w   ~ N(m, V)               m  | V     ~ N(m0, V)        V     ~ IW(omega0, V0)
//   b_i ~ Bernoulli(pi)         pi ~ Beta(a_pi, b_pi)
struct Hyperparams {
  Vector mu0, m0;
  Matrix sigma0, v0;
  double omega0 = 0.0;
  double a_pi = 0.0, b_pi = 0.0;
};

// Standard initialization from the observed data alone:
//   a_pi = b_pi = n/2,  mu0 = m0 = mean(y),  omega0 = d + 1,
//   Sigma0 = (1/n) sum (y_i - mu0)(y_i - mu0)',  V0 = Sigma0 / 10^(dwr/10).
// dwr_db is the embedding strength the attacker assumes.
Hyperparams init_hyperparams(const SignalMatrix& y, double dwr_db);

// Shape and domain checks (omega0 > d-1, positive Beta parameters, SPD
// scales); throws InvalidParameter / NotPositiveDefinite.
void validate_hyperparams(const Hyperparams& h, Eigen::Index d);

}  // namespace ssw
