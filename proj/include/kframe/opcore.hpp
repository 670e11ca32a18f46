#ifndef KFRAME_OPCORE_HPP
#define KFRAME_OPCORE_HPP

// Dense operator algebra on H = C^d (or R^d). The inner product is linear in
// its first argument, <f, g> = g^* f, and every adjoint is a conjugate
// transpose. In finite dimension every range is closed, so the
// pseudo-inverse below exists for every operator.

#include <kframe/types.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace kframe {

namespace detail {

template <class Derived>
Matrix<typename Derived::Scalar> hermitian_part(
    const Eigen::MatrixBase<Derived>& t) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> h = t;
  return (h + h.adjoint()) * RealOf<Scalar>(0.5);
}

template <class Scalar>
using HermitianEigen = Eigen::SelfAdjointEigenSolver<Matrix<Scalar>>;

template <class Scalar>
Index numerical_rank(const Vector<RealOf<Scalar>>& singular_values,
                     double rel_threshold) {
  if (singular_values.size() == 0) return 0;
  const double cutoff = rel_threshold * double(singular_values(0));
  Index r = 0;
  while (r < singular_values.size() && double(singular_values(r)) > cutoff &&
         singular_values(r) > 0)
    ++r;
  return r;
}

}  // namespace detail

/// ||T - T^*||_F <= rel_eq * max(1, ||T||_F).
template <class Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& t,
                  const Tolerances& tol = {}) {
  detail::require_square(t, "operator");
  const double scale = std::max(1.0, double(t.norm()));
  return double((t - t.adjoint()).norm()) <= tol.rel_eq * scale;
}

/// Largest singular value.
template <class Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& t) {
  using Scalar = typename Derived::Scalar;
  if (t.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix<Scalar>> svd(t.derived());
  return double(svd.singularValues()(0));
}

/// Ascending eigenvalues of the Hermitian part of T.
template <class Derived>
Vector<double> hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& t) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(t, "operator");
  detail::HermitianEigen<Scalar> eig(detail::hermitian_part(t),
                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues().template cast<double>();
}

/// Optimal bounds (lambda_min, lambda_max) of T in GL+(H), or rejection
/// naming the failed condition.
template <class Derived>
OperatorBounds gl_plus_check(const Eigen::MatrixBase<Derived>& t,
                             const Tolerances& tol = {}) {
  detail::require_square(t, "operator");
  if (t.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "empty operator");
  if (!is_hermitian(t, tol))
    throw Error(ErrorKind::NotHermitian, "operator is not self-adjoint");
  const Vector<double> lambda = hermitian_eigenvalues(t);
  const double lo = lambda(0);
  const double hi = lambda(lambda.size() - 1);
  const double norm = std::max(std::abs(lo), std::abs(hi));
  if (!(lo > tol.psd_slack * norm))
    throw Error(ErrorKind::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(lo) +
                    " is not above the positivity slack");
  return {lo, hi};
}

/// Applies a real function to the spectrum of a Hermitian operator:
/// V diag(fn(lambda)) V^*. Eigenvalues are passed unclamped.
template <class Derived, class Fn>
Matrix<typename Derived::Scalar> spectral_apply(
    const Eigen::MatrixBase<Derived>& t, Fn&& fn) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(t, "operator");
  detail::HermitianEigen<Scalar> eig(detail::hermitian_part(t));
  Vector<RealOf<Scalar>> mapped = eig.eigenvalues();
  for (Index i = 0; i < mapped.size(); ++i)
    mapped(i) = RealOf<Scalar>(fn(double(mapped(i))));
  return eig.eigenvectors() * mapped.asDiagonal() *
         eig.eigenvectors().adjoint();
}

/// Hermitian positive semidefinite square root. Eigenvalues in
/// [-psd_slack*||T||, 0] are clamped to zero; anything more negative is an
/// error.
template <class Derived>
Matrix<typename Derived::Scalar> operator_sqrt(
    const Eigen::MatrixBase<Derived>& t, const Tolerances& tol = {}) {
  detail::require_square(t, "operator");
  if (!is_hermitian(t, tol))
    throw Error(ErrorKind::NotHermitian, "square root needs a self-adjoint operator");
  const Vector<double> lambda = hermitian_eigenvalues(t);
  if (lambda.size() == 0) return t;
  const double norm =
      std::max(std::abs(lambda(0)), std::abs(lambda(lambda.size() - 1)));
  if (lambda(0) < -tol.psd_slack * norm)
    throw Error(ErrorKind::IndefiniteOperator,
                "eigenvalue " + std::to_string(lambda(0)) + " below -slack");
  return spectral_apply(t, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

/// Moore-Penrose pseudo-inverse via SVD; singular values at or below
/// rank_threshold * sigma_max count as zero. Accepts rectangular input.
template <class Derived>
Matrix<typename Derived::Scalar> pseudo_inverse(
    const Eigen::MatrixBase<Derived>& u, const Tolerances& tol = {}) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> result = Matrix<Scalar>::Zero(u.cols(), u.rows());
  if (u.size() == 0) return result;
  Eigen::JacobiSVD<Matrix<Scalar>> svd(u.derived(),
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index r = detail::numerical_rank<Scalar>(
      svd.singularValues(), tol.rank_threshold(std::max(u.rows(), u.cols())));
  if (r == 0) return result;
  Vector<RealOf<Scalar>> inv_sigma = svd.singularValues().head(r).cwiseInverse();
  result.noalias() = svd.matrixV().leftCols(r) * inv_sigma.asDiagonal() *
                     svd.matrixU().leftCols(r).adjoint();
  return result;
}

/// Orthonormal basis (d x r) of the range of U, r the numerical rank.
template <class Derived>
Matrix<typename Derived::Scalar> range_basis(const Eigen::MatrixBase<Derived>& u,
                                             const Tolerances& tol = {}) {
  using Scalar = typename Derived::Scalar;
  if (u.size() == 0) return Matrix<Scalar>(u.rows(), 0);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(u.derived(), Eigen::ComputeThinU);
  const Index r = detail::numerical_rank<Scalar>(
      svd.singularValues(), tol.rank_threshold(std::max(u.rows(), u.cols())));
  return svd.matrixU().leftCols(r);
}

template <class Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& u,
                     const Tolerances& tol = {}) {
  return range_basis(u, tol).cols();
}

/// T1 <= T2 in the operator order, up to psd_slack * max(1, ||T1||, ||T2||).
template <class D1, class D2>
bool op_leq(const Eigen::MatrixBase<D1>& t1, const Eigen::MatrixBase<D2>& t2,
            const Tolerances& tol = {}) {
  detail::require_square(t1, "left operand");
  detail::require_square(t2, "right operand");
  detail::require_same(t1.rows(), t2.rows(), "operator-order dimensions");
  if (!is_hermitian(t1, tol) || !is_hermitian(t2, tol))
    throw Error(ErrorKind::NotHermitian,
                "operator order is defined for self-adjoint operators only");
  if (t1.rows() == 0) return true;
  const Vector<double> l1 = hermitian_eigenvalues(t1);
  const Vector<double> l2 = hermitian_eigenvalues(t2);
  const double scale = std::max({1.0, l1.cwiseAbs().maxCoeff(), l2.cwiseAbs().maxCoeff()});
  const Vector<double> gap = hermitian_eigenvalues(t2 - t1);
  return gap(0) >= -tol.psd_slack * scale;
}

/// Bounds of T^{-1} from bounds of T: (1/M, 1/m).
inline OperatorBounds inverse_bounds(const OperatorBounds& b) {
  return {1.0 / b.upper, 1.0 / b.lower};
}

/// Largest A with Y Y^* >= A Z Z^*, and a direction attaining it.
///
/// If R(Z) is not contained in R(Y) no positive A exists; the witness is
/// then a unit vector w in R(Y)^perp with Z^* w != 0. Otherwise
/// A = 1 / ||Y^+ Z||^2, attained at w = (Y^+)^* v for the top left singular
/// vector v of Y^+ Z. A zero Z yields +inf.
template <class Scalar>
struct Domination {
  bool range_contained = true;
  double constant = 0;
  double range_defect = 0;  // ||(I - P_{R(Y)}) Z|| / ||Z||
  Vector<Scalar> witness;
};

template <class DY, class DZ>
Domination<typename DY::Scalar> optimal_domination(
    const Eigen::MatrixBase<DY>& y, const Eigen::MatrixBase<DZ>& z,
    const Tolerances& tol = {}) {
  using Scalar = typename DY::Scalar;
  detail::require_same(y.rows(), z.rows(), "domination operand rows");
  const Index d = y.rows();
  Domination<Scalar> out;
  out.witness = Vector<Scalar>::Zero(d);

  Eigen::JacobiSVD<Matrix<Scalar>> svd(y.derived(), Eigen::ComputeThinU);
  const Index r = detail::numerical_rank<Scalar>(
      svd.singularValues(), tol.rank_threshold(std::max(y.rows(), y.cols())));
  const Matrix<Scalar> basis = svd.matrixU().leftCols(r);

  const double z_norm = operator_norm(z);
  if (z_norm == 0) {
    out.constant = std::numeric_limits<double>::infinity();
    if (d > 0) out.witness(0) = Scalar(1);
    return out;
  }

  const Matrix<Scalar> defect = z - basis * (basis.adjoint() * z);
  Eigen::JacobiSVD<Matrix<Scalar>> defect_svd(defect, Eigen::ComputeThinU);
  out.range_defect = double(defect_svd.singularValues()(0)) / z_norm;
  if (out.range_defect > tol.rel_eq) {
    out.range_contained = false;
    out.constant = 0;
    out.witness = defect_svd.matrixU().col(0);
    return out;
  }

  const Vector<RealOf<Scalar>> inv_sigma =
      svd.singularValues().head(r).cwiseInverse();
  const Matrix<Scalar> coeff = inv_sigma.asDiagonal() * (basis.adjoint() * z);
  Eigen::JacobiSVD<Matrix<Scalar>> coeff_svd(coeff, Eigen::ComputeThinU);
  const double top = double(coeff_svd.singularValues()(0));
  if (top == 0) {
    out.constant = std::numeric_limits<double>::infinity();
    return out;
  }
  out.constant = 1.0 / (top * top);
  Vector<Scalar> w = basis * (inv_sigma.asDiagonal() * coeff_svd.matrixU().col(0));
  out.witness = w / w.norm();
  return out;
}

}  // namespace kframe

#endif  // KFRAME_OPCORE_HPP
