#include "ssw/linalg.hpp"

#include <cmath>
#include <string>

#include "ssw/errors.hpp"

namespace ssw {

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Cholesky Cholesky::compute(const Matrix& a) {
  if (a.rows() != a.cols())
    throw DimensionMismatch("cholesky: matrix is not square");
  if (!is_symmetric(a))
    throw InvalidParameter("cholesky: matrix is not symmetric");

  const Matrix sym = symmetrized(a);
  const double tr = sym.trace();
  const Eigen::Index d = sym.rows();

  Cholesky out;
  for (double eps = 0.0; eps <= 1e-6; eps = (eps == 0.0) ? 1e-12 : eps * 10.0) {
    const double shift = eps * tr / static_cast<double>(d);
    Eigen::LLT<Matrix> llt(shift == 0.0
                               ? sym
                               : Matrix(sym + shift * Matrix::Identity(d, d)));
    if (llt.info() == Eigen::Success &&
        llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
      out.l_ = llt.matrixL();
      out.jitter_ = shift;
      return out;
    }
    if (tr <= 0.0) break;  // jitter cannot help
  }
  throw NotPositiveDefinite(
      "cholesky: not positive definite after jitter escalation (trace=" +
      std::to_string(tr) + ")");
}

double Cholesky::log_det() const {
  return 2.0 * l_.diagonal().array().log().sum();
}

Vector Cholesky::solve(const Vector& b) const {
  Vector y = l_.triangularView<Eigen::Lower>().solve(b);
  return l_.triangularView<Eigen::Lower>().transpose().solve(y);
}

Matrix Cholesky::solve(const Matrix& b) const {
  Matrix y = l_.triangularView<Eigen::Lower>().solve(b);
  return l_.triangularView<Eigen::Lower>().transpose().solve(y);
}

Vector Cholesky::solve_lower(const Vector& b) const {
  return l_.triangularView<Eigen::Lower>().solve(b);
}

Matrix Cholesky::solve_lower(const Matrix& b) const {
  return l_.triangularView<Eigen::Lower>().solve(b);
}

double Cholesky::quad_form(const Vector& x) const {
  return solve_lower(x).squaredNorm();
}

Matrix Cholesky::inverse() const {
  return symmetrized(solve(Matrix(Matrix::Identity(l_.rows(), l_.cols()))));
}

}  // namespace ssw
