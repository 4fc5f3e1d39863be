#include "ssw/model.hpp"

#include <cmath>

#include "ssw/errors.hpp"

namespace ssw {

Hyperparams init_hyperparams(const SignalMatrix& y, double dwr_db) {
  const Eigen::Index n = y.rows();
  const Eigen::Index d = y.cols();
  if (n < 2) throw InvalidParameter("init_hyperparams: need at least 2 rows");

  Hyperparams h;
  h.mu0 = y.colwise().mean();
  h.m0 = h.mu0;
  h.omega0 = static_cast<double>(d) + 1.0;
  h.a_pi = 0.5 * static_cast<double>(n);
  h.b_pi = h.a_pi;

  const Matrix centered = y.rowwise() - h.mu0.transpose();
  h.sigma0 = symmetrized(centered.transpose() * centered / static_cast<double>(n));
  try {
    (void)Cholesky::compute(h.sigma0);
  } catch (const NotPositiveDefinite&) {
    throw DegenerateData(
        "init_hyperparams: sample covariance is singular even after jitter");
  }
  h.v0 = h.sigma0 / std::pow(10.0, dwr_db / 10.0);
  return h;
}

void validate_hyperparams(const Hyperparams& h, Eigen::Index d) {
  if (h.mu0.size() != d || h.m0.size() != d || h.sigma0.rows() != d ||
      h.sigma0.cols() != d || h.v0.rows() != d || h.v0.cols() != d)
    throw InvalidParameter("hyperparams: dimension mismatch");
  if (!(h.omega0 > static_cast<double>(d) - 1.0))
    throw InvalidParameter("hyperparams: omega0 must exceed d - 1");
  if (!(h.a_pi > 0.0) || !(h.b_pi > 0.0))
    throw InvalidParameter("hyperparams: Beta parameters must be positive");
  (void)Cholesky::compute(h.sigma0);
  (void)Cholesky::compute(h.v0);
}

}  // namespace ssw
