#ifndef KFRAME_CONTROLLED_HPP
#define KFRAME_CONTROLLED_HPP

// C-controlled K-frames. The controlled quadratic form is <C S f, f>, the
// form of the controlled operator L_C = C S; it is real for every f exactly
// when C S is self-adjoint.

#include <kframe/kframes.hpp>

namespace kframe {

struct BoundPair {
  double lower = 0;
  double upper = 0;
};

/// A validated C in GL+(H) with its square root, inverse and inverse square
/// root cached.
template <class Scalar>
class Controller {
 public:
  explicit Controller(Matrix<Scalar> c, const Tolerances& tol = {})
      : c_(std::move(c)) {
    if (!all_finite(c_))
      throw Error(ErrorKind::InvalidParameters, "controller entries must be finite");
    bounds_ = gl_plus_check(c_, tol);
    c_sqrt_ = spectral_apply(c_, [](double x) { return std::sqrt(x); });
    c_inv_ = spectral_apply(c_, [](double x) { return 1.0 / x; });
    c_inv_sqrt_ = spectral_apply(c_, [](double x) { return 1.0 / std::sqrt(x); });
  }

  Index dim() const { return c_.rows(); }
  const Matrix<Scalar>& op() const { return c_; }
  const Matrix<Scalar>& sqrt() const { return c_sqrt_; }
  const Matrix<Scalar>& inverse() const { return c_inv_; }
  const Matrix<Scalar>& inverse_sqrt() const { return c_inv_sqrt_; }
  const OperatorBounds& bounds() const { return bounds_; }

 private:
  Matrix<Scalar> c_;
  Matrix<Scalar> c_sqrt_;
  Matrix<Scalar> c_inv_;
  Matrix<Scalar> c_inv_sqrt_;
  OperatorBounds bounds_;
};

template <class Scalar>
Controller<Scalar> make_controller(Matrix<Scalar> c, const Tolerances& tol = {}) {
  return Controller<Scalar>(std::move(c), tol);
}

/// ||CK - KC||_F <= rel_eq ||C||_F ||K||_F.
template <class Scalar>
bool commutes(const Controller<Scalar>& ctrl, const Matrix<Scalar>& k,
              const Tolerances& tol = {}) {
  detail::require_square(k, "K");
  detail::require_same(k.rows(), ctrl.dim(), "K versus controller dimension");
  const auto& c = ctrl.op();
  const double diff = (c * k - k * c).norm();
  return diff <= tol.rel_eq * double(c.norm()) * double(k.norm());
}

/// L_C = C S.
template <class Scalar>
Matrix<Scalar> controlled_operator(const FrameSequence<Scalar>& f,
                                   const Controller<Scalar>& ctrl) {
  detail::require_same(f.dim(), ctrl.dim(), "frame versus controller dimension");
  Matrix<Scalar> l = ctrl.op() * frame_operator(f);
  return l;
}

/// Re <C S f, f>; throws NonRealForm when the imaginary part exceeds
/// rel_eq * ||C|| ||S|| ||f||^2.
template <class Scalar>
double controlled_form(const FrameSequence<Scalar>& f,
                       const Controller<Scalar>& ctrl, const Vector<Scalar>& x,
                       const Tolerances& tol = {}) {
  detail::require_same(x.size(), f.dim(), "vector dimension");
  const Matrix<Scalar> s = frame_operator(f);
  const Scalar value = x.dot(ctrl.op() * (s * x));  // <CSx, x> = x^* C S x
  const double bound =
      tol.rel_eq * operator_norm(ctrl.op()) * operator_norm(s) * x.squaredNorm();
  if (std::abs(std::imag(value)) > bound)
    throw Error(ErrorKind::NonRealForm,
                "controlled form has imaginary part " +
                    std::to_string(std::imag(value)),
                x);
  return std::real(value);
}

template <class Scalar>
struct ControlledReport {
  bool commutes_with_k = false;
  bool form_is_real = false;
  bool is_controlled_kframe = false;
  bool vacuous = false;
  double lower_opt = 0;
  double upper_opt = 0;
  Index rank_k = 0;
  Vector<Scalar> witness;
};

namespace detail {

template <class Scalar>
Matrix<Scalar> validated_controlled_operator(const FrameSequence<Scalar>& f,
                                             const Matrix<Scalar>& k,
                                             const Controller<Scalar>& ctrl,
                                             const Tolerances& tol) {
  detail::require_same(f.dim(), ctrl.dim(), "frame versus controller dimension");
  if (!commutes(ctrl, k, tol))
    throw Error(ErrorKind::CommutationFailure, "C K != K C");
  Matrix<Scalar> l = controlled_operator(f, ctrl);
  if (!is_hermitian(l, tol))
    throw Error(ErrorKind::NonRealForm,
                "C S is not self-adjoint, the controlled form is complex");
  return l;
}

}  // namespace detail

/// Optimal A, B in A ||C^{1/2} K^* f||^2 <= <C S f, f> <= B ||f||^2.
template <class Scalar>
ControlledReport<Scalar> controlled_kframe_check(const FrameSequence<Scalar>& f,
                                                 const Matrix<Scalar>& k,
                                                 const Controller<Scalar>& ctrl,
                                                 const Tolerances& tol = {}) {
  const Matrix<Scalar> l = detail::validated_controlled_operator(f, k, ctrl, tol);
  ControlledReport<Scalar> report;
  report.commutes_with_k = true;
  report.form_is_real = true;
  const Vector<double> spectrum = hermitian_eigenvalues(l);
  report.upper_opt = std::max(0.0, spectrum(spectrum.size() - 1));
  report.rank_k = numerical_rank(k, tol);
  if (report.rank_k == 0) {
    report.vacuous = true;
    report.is_controlled_kframe = true;
    report.witness = Vector<Scalar>::Zero(f.dim());
    return report;
  }
  // C S = (C^{1/2} T)(C^{1/2} T)^* and K C K^* = (K C^{1/2})(K C^{1/2})^*
  // when C commutes with S.
  const Matrix<Scalar> y = ctrl.sqrt() * f.synthesis_matrix();
  const Matrix<Scalar> z = k * ctrl.sqrt();
  const auto dom = optimal_domination(y, z, tol);
  report.lower_opt = dom.constant;
  report.witness = dom.witness;
  const double z_norm = operator_norm(z);
  report.is_controlled_kframe =
      report.lower_opt > tol.psd_slack * report.upper_opt / (z_norm * z_norm);
  return report;
}

/// C S >= A C K K^*.
template <class Scalar>
bool controlled_operator_inequality(const FrameSequence<Scalar>& f,
                                    const Matrix<Scalar>& k,
                                    const Controller<Scalar>& ctrl, double a,
                                    const Tolerances& tol = {}) {
  if (!(a > 0)) throw Error(ErrorKind::InvalidParameters, "A must be positive");
  detail::require_square(k, "K");
  detail::require_same(k.rows(), f.dim(), "K versus frame dimension");
  const Matrix<Scalar> rhs = controlled_operator(f, ctrl);
  const Matrix<Scalar> lhs = ctrl.op() * k * k.adjoint() * RealOf<Scalar>(a);
  if (!is_hermitian(lhs, tol) || !is_hermitian(rhs, tol))
    throw Error(ErrorKind::NonHermitianComparison,
                "C S and C K K^* must be self-adjoint to be ordered");
  return op_leq(lhs, rhs, tol);
}

/// A K C K^* <= L_C <= B I.
template <class Scalar>
bool sandwich_inequality_check(const FrameSequence<Scalar>& f,
                               const Matrix<Scalar>& k,
                               const Controller<Scalar>& ctrl, double a,
                               double b, const Tolerances& tol = {}) {
  detail::require_square(k, "K");
  detail::require_same(k.rows(), f.dim(), "K versus frame dimension");
  const Matrix<Scalar> l = controlled_operator(f, ctrl);
  const Matrix<Scalar> lower = k * ctrl.op() * k.adjoint() * RealOf<Scalar>(a);
  if (!is_hermitian(l, tol) || !is_hermitian(lower, tol))
    throw Error(ErrorKind::NonHermitianComparison,
                "L_C and K C K^* must be self-adjoint to be ordered");
  const Matrix<Scalar> upper =
      Matrix<Scalar>::Identity(f.dim(), f.dim()) * RealOf<Scalar>(b);
  return op_leq(lower, l, tol) && op_leq(l, upper, tol);
}

/// Controlled bounds (A, B) to K-frame bounds
/// (A ||C^{1/2}||^-2, B ||C^{-1/2}||^2). The upper constant is always valid
/// when C S = S C; the lower one is not once ||C|| < 1 (for commuting C, K
/// the optimal K-frame constant equals A itself). Use
/// certified_kframe_bounds when validity matters.
template <class Scalar>
BoundPair bounds_to_kframe(double a, double b, const Controller<Scalar>& ctrl) {
  const double root = operator_norm(ctrl.sqrt());
  const double inv_root = operator_norm(ctrl.inverse_sqrt());
  return {a / (root * root), b * inv_root * inv_root};
}

/// (A lambda_min(C) / ||C||, B ||C^-1||), valid whenever C S = S C:
/// S >= C S / ||C|| >= A K C K^* / ||C|| >= A lambda_min(C) / ||C|| K K^*
/// and S = C^-1 (C S) <= ||C^-1|| B.
template <class Scalar>
BoundPair certified_kframe_bounds(double a, double b, const Controller<Scalar>& ctrl) {
  const auto& cb = ctrl.bounds();
  return {a * cb.lower / cb.upper, b / cb.lower};
}

/// K-frame bounds (A', B') to controlled bounds (A', B' ||C||).
template <class Scalar>
BoundPair bounds_to_controlled(double a, double b, const Controller<Scalar>& ctrl,
                               const Matrix<Scalar>& k,
                               const Tolerances& tol = {}) {
  if (!commutes(ctrl, k, tol))
    throw Error(ErrorKind::CommutationFailure, "C K != K C");
  return {a, b * operator_norm(ctrl.op())};
}

/// sum <f, f_n> C f_n = sum <f, C f_n> f_n for every f, i.e. C S = S C, with
/// L_C self-adjoint.
template <class Scalar>
bool interchange_identity_check(const FrameSequence<Scalar>& f,
                                const Controller<Scalar>& ctrl,
                                const Tolerances& tol = {}) {
  detail::require_same(f.dim(), ctrl.dim(), "frame versus controller dimension");
  const Matrix<Scalar> s = frame_operator(f);
  const Matrix<Scalar> cs = ctrl.op() * s;
  if (!is_hermitian(cs, tol))
    throw Error(ErrorKind::NonRealForm, "C S is not self-adjoint");
  const Matrix<Scalar> sc = s * ctrl.op();
  const double bound = tol.rel_eq * double(ctrl.op().norm()) * double(s.norm());
  return double((cs - sc).norm()) <= bound &&
         double((cs - cs.adjoint()).norm()) <= bound;
}

}  // namespace kframe

#endif  // KFRAME_CONTROLLED_HPP
