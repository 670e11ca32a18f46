#ifndef KFRAME_RANDOM_HPP
#define KFRAME_RANDOM_HPP

// Seeded random operators and frames used by the instance generators,
// the sampling verifiers and the test suites.

#include <kframe/types.hpp>

#include <Eigen/QR>

#include <random>
#include <type_traits>

namespace kframe {

using Rng = std::mt19937_64;

template <class Scalar>
Scalar gaussian_scalar(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    const double re = normal(rng);
    const double im = normal(rng);
    return Scalar(re, im) * RealOf<Scalar>(M_SQRT1_2);
  } else {
    return Scalar(normal(rng));
  }
}

template <class Scalar>
Matrix<Scalar> gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix<Scalar> m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = gaussian_scalar<Scalar>(rng);
  return m;
}

template <class Scalar>
Vector<Scalar> gaussian_vector(Index n, Rng& rng) {
  return gaussian_matrix<Scalar>(n, 1, rng);
}

inline double uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Haar-distributed unitary (orthogonal for real scalars).
template <class Scalar>
Matrix<Scalar> random_unitary(Index n, Rng& rng) {
  const Matrix<Scalar> g = gaussian_matrix<Scalar>(n, n, rng);
  Eigen::HouseholderQR<Matrix<Scalar>> qr(g);
  Matrix<Scalar> q = qr.householderQ() * Matrix<Scalar>::Identity(n, n);
  const Matrix<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const auto diag = r(j, j);
    if (std::abs(diag) > 0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

/// Q diag(mu) Q^* with mu uniform in [lo, hi].
template <class Scalar>
Matrix<Scalar> random_gl_plus(Index n, double lo, double hi, Rng& rng) {
  const Matrix<Scalar> q = random_unitary<Scalar>(n, rng);
  Vector<RealOf<Scalar>> mu(n);
  for (Index i = 0; i < n; ++i) mu(i) = RealOf<Scalar>(uniform(lo, hi, rng));
  Matrix<Scalar> t = q * mu.asDiagonal() * q.adjoint();
  return (t + t.adjoint()) * RealOf<Scalar>(0.5);
}

/// U diag(sigma) V^* of rank r with nonzero singular values in [lo, hi].
template <class Scalar>
Matrix<Scalar> random_rank(Index rows, Index cols, Index rank, double lo,
                           double hi, Rng& rng) {
  const Matrix<Scalar> u = random_unitary<Scalar>(rows, rng).leftCols(rank);
  const Matrix<Scalar> v = random_unitary<Scalar>(cols, rng).leftCols(rank);
  Vector<RealOf<Scalar>> sigma(rank);
  for (Index i = 0; i < rank; ++i) sigma(i) = RealOf<Scalar>(uniform(lo, hi, rng));
  return u * sigma.asDiagonal() * v.adjoint();
}

/// d x n synthesis matrix with orthonormal rows (a Parseval frame), n >= d.
template <class Scalar>
Matrix<Scalar> random_parseval(Index d, Index n, Rng& rng) {
  return random_unitary<Scalar>(n, rng).topRows(d);
}

}  // namespace kframe

#endif  // KFRAME_RANDOM_HPP
