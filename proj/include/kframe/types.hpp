#ifndef KFRAME_TYPES_HPP
#define KFRAME_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kframe {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

using Index = Eigen::Index;
using cplx = std::complex<double>;
using MatrixXc = Matrix<cplx>;
using VectorXc = Vector<cplx>;

enum class ErrorKind {
  NotHermitian,
  NotPositiveDefinite,
  IndefiniteOperator,
  DimensionMismatch,
  RangeDeficiency,
  PreconditionFailed,
  NotOrthonormal,
  CommutationFailure,
  NonRealForm,
  NonHermitianComparison,
  NotConverged,
  InvalidParameters,
  ParseError,
  AssertionFailure,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::IndefiniteOperator: return "IndefiniteOperator";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RangeDeficiency: return "RangeDeficiency";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::CommutationFailure: return "CommutationFailure";
    case ErrorKind::NonRealForm: return "NonRealForm";
    case ErrorKind::NonHermitianComparison: return "NonHermitianComparison";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::AssertionFailure: return "AssertionFailure";
  }
  return "Unknown";
}

/// Every failed precondition or rejected input surfaces as an Error.
/// Some kinds carry a witness vector (the direction in which the
/// violated identity or inequality was observed).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  template <class Derived>
  Error(ErrorKind kind, const std::string& what,
        const Eigen::MatrixBase<Derived>& witness)
      : Error(kind, what) {
    witness_.reserve(static_cast<std::size_t>(witness.size()));
    for (Index i = 0; i < witness.size(); ++i)
      witness_.emplace_back(cplx(witness(i)));
  }

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<cplx>& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  std::vector<cplx> witness_;
};

/// Numerical tolerance policy shared by every check.
struct Tolerances {
  double rel_eq = 1e-9;     // equality of operators/vectors
  double psd_slack = 1e-9;  // operator-order tests
  std::optional<double> rank_rel;  // unset: 1e-12 * d

  /// Relative singular-value cutoff for numerical rank in dimension d.
  double rank_threshold(Index d) const {
    return rank_rel ? *rank_rel : 1e-12 * static_cast<double>(d);
  }

  void validate() const {
    if (!(rel_eq > 0) || !(psd_slack > 0) || (rank_rel && !(*rank_rel > 0)))
      throw Error(ErrorKind::InvalidParameters,
                  "tolerances must be strictly positive");
  }
};

/// Certifies m*I <= T <= M*I.
struct OperatorBounds {
  double lower = 1;
  double upper = 1;

  static OperatorBounds make(double lower, double upper) {
    if (!(lower > 0) || !(upper >= lower) || !std::isfinite(upper))
      throw Error(ErrorKind::InvalidParameters,
                  "operator bounds need 0 < lower <= upper < inf");
    return {lower, upper};
  }
};

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.derived().array().isFinite().all();
}

namespace detail {

template <class Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " must be square, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_same(Index a, Index b, const char* what) {
  if (a != b)
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " +
                    std::to_string(b));
}

}  // namespace detail
}  // namespace kframe

#endif  // KFRAME_TYPES_HPP
