#pragma once

#include <Eigen/Dense>

namespace ssw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative tolerance for the symmetry invariant of SPD inputs.
inline constexpr double kSymmetryRelTol = 1e-10;

bool is_symmetric(const Matrix& a, double rel_tol = kSymmetryRelTol);

inline Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

// Cholesky factorization with the jitter ladder: if LL^T fails, retry with
// A + eps * (tr(A)/d) * I, eps escalating 1e-12 -> 1e-6 by decades, then
// throw NotPositiveDefinite. All covariance algebra in the codebase goes
// through this class; nothing ever forms an explicit inverse outside of it.
class Cholesky {
 public:
  static Cholesky compute(const Matrix& a);

  const Matrix& lower() const { return l_; }
  Eigen::Index dim() const { return l_.rows(); }

  // ln|A| = 2 sum ln L_ii
  double log_det() const;

  // A^{-1} b via forward + back substitution.
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

  // L^{-1} b (forward substitution only).
  Vector solve_lower(const Vector& b) const;
  Matrix solve_lower(const Matrix& b) const;

  // x' A^{-1} x = ||L^{-1} x||^2
  double quad_form(const Vector& x) const;

  // A^{-1}, symmetrized.
  Matrix inverse() const;

  // Total diagonal shift that was added before factorization succeeded.
  double jitter() const { return jitter_; }

 private:
  Matrix l_;
  double jitter_ = 0.0;
};

}  // namespace ssw
