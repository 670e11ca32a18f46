#ifndef KFRAME_FRAMES_HPP
#define KFRAME_FRAMES_HPP

// Finite frame sequences {f_1, ..., f_n} in C^d together with the synthesis
// operator T a = sum a_j f_j, the analysis operator T^* f = (<f, f_j>)_j and
// the frame operator S = T T^*.

#include <kframe/opcore.hpp>

#include <optional>

namespace kframe {

/// Ordered family of n >= 1 vectors in dimension d, stored column-wise as
/// the d x n synthesis matrix.
template <class Scalar>
class FrameSequence {
 public:
  explicit FrameSequence(Matrix<Scalar> synthesis)
      : synthesis_(std::move(synthesis)) {
    if (synthesis_.rows() < 1 || synthesis_.cols() < 1)
      throw Error(ErrorKind::InvalidParameters,
                  "a frame sequence needs dimension >= 1 and at least one vector");
    if (!all_finite(synthesis_))
      throw Error(ErrorKind::InvalidParameters, "frame vectors must be finite");
  }

  Index dim() const { return synthesis_.rows(); }
  Index count() const { return synthesis_.cols(); }
  const Matrix<Scalar>& synthesis_matrix() const { return synthesis_; }
  auto vector(Index j) const { return synthesis_.col(j); }

  /// Appends vectors (columns of `more`).
  FrameSequence appended(const Matrix<Scalar>& more) const {
    detail::require_same(more.rows(), dim(), "appended vector dimension");
    Matrix<Scalar> m(dim(), count() + more.cols());
    m << synthesis_, more;
    return FrameSequence(std::move(m));
  }

 private:
  Matrix<Scalar> synthesis_;
};

template <class Scalar>
Vector<Scalar> synthesis(const FrameSequence<Scalar>& f,
                         const Vector<Scalar>& coefficients) {
  detail::require_same(coefficients.size(), f.count(), "coefficient count");
  return f.synthesis_matrix() * coefficients;
}

template <class Scalar>
Vector<Scalar> analysis(const FrameSequence<Scalar>& f, const Vector<Scalar>& x) {
  detail::require_same(x.size(), f.dim(), "vector dimension");
  return f.synthesis_matrix().adjoint() * x;
}

template <class Scalar>
Matrix<Scalar> frame_operator(const FrameSequence<Scalar>& f) {
  const auto& t = f.synthesis_matrix();
  Matrix<Scalar> s = t * t.adjoint();
  return s;
}

/// Optimal Bessel bound, plus optimal frame bounds when S is positive
/// definite.
struct FrameBounds {
  double bessel = 0;
  std::optional<OperatorBounds> frame;

  bool is_frame() const { return frame.has_value(); }
};

template <class Scalar>
FrameBounds frame_bounds(const FrameSequence<Scalar>& f,
                         const Tolerances& tol = {}) {
  const Vector<double> lambda = hermitian_eigenvalues(frame_operator(f));
  FrameBounds out;
  out.bessel = std::max(0.0, lambda(lambda.size() - 1));
  if (lambda(0) > tol.psd_slack * out.bessel)
    out.frame = OperatorBounds{lambda(0), out.bessel};
  return out;
}

}  // namespace kframe

#endif  // KFRAME_FRAMES_HPP
