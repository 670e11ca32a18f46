#ifndef KFRAME_KFRAMES_HPP
#define KFRAME_KFRAMES_HPP

// K-frames: families {f_n} with A ||K^* f||^2 <= sum |<f, f_n>|^2 <= B ||f||^2.

#include <kframe/frames.hpp>
#include <kframe/random.hpp>

#include <cstdint>
#include <limits>

namespace kframe {

template <class Scalar>
struct KFrameReport {
  bool is_bessel = true;  // every finite family is Bessel
  bool is_kframe = false;
  bool vacuous = false;   // rank K = 0: the lower inequality holds trivially
  bool range_contained = true;  // R(K) inside R(T)
  double lower_opt = 0;   // optimal A
  double upper_opt = 0;   // optimal B = lambda_max(S)
  Index rank_k = 0;
  Vector<Scalar> worst_rayleigh_witness;  // attains A (or violates when A = 0)
};

template <class Scalar>
KFrameReport<Scalar> kframe_check(const FrameSequence<Scalar>& f,
                                  const Matrix<Scalar>& k,
                                  const Tolerances& tol = {}) {
  detail::require_square(k, "K");
  detail::require_same(k.rows(), f.dim(), "K versus frame dimension");
  KFrameReport<Scalar> report;
  const Vector<double> spectrum = hermitian_eigenvalues(frame_operator(f));
  report.upper_opt = std::max(0.0, spectrum(spectrum.size() - 1));
  report.rank_k = numerical_rank(k, tol);

  if (report.rank_k == 0) {
    report.vacuous = true;
    report.is_kframe = true;
    report.worst_rayleigh_witness = Vector<Scalar>::Zero(f.dim());
    return report;
  }

  const auto dom = optimal_domination(f.synthesis_matrix(), k, tol);
  report.range_contained = dom.range_contained;
  report.lower_opt = dom.constant;
  report.worst_rayleigh_witness = dom.witness;
  const double k_norm = operator_norm(k);
  report.is_kframe =
      report.lower_opt > tol.psd_slack * report.upper_opt / (k_norm * k_norm);
  return report;
}

/// S >= A K K^*.
template <class Scalar>
bool kframe_operator_inequality(const FrameSequence<Scalar>& f,
                                const Matrix<Scalar>& k, double a,
                                const Tolerances& tol = {}) {
  if (!(a > 0))
    throw Error(ErrorKind::InvalidParameters, "A must be positive");
  detail::require_square(k, "K");
  detail::require_same(k.rows(), f.dim(), "K versus frame dimension");
  const Matrix<Scalar> kk = k * k.adjoint();
  return op_leq(kk * RealOf<Scalar>(a), frame_operator(f), tol);
}

/// Result of checking lower * <M f, f> <= <S f, f> <= upper * ||f||^2 on
/// random samples.
struct SampledInequality {
  Index samples = 0;
  Index violations = 0;
  double min_ratio = std::numeric_limits<double>::infinity();  // <Sf,f>/<Mf,f>
  double worst_margin = std::numeric_limits<double>::infinity();
};

/// Direct sampling of the sandwich lower * <inner f, f> <= <outer f, f> <=
/// upper * ||f||^2 with absolute slack `slack * scale * ||f||^2`.
template <class Scalar>
SampledInequality sample_sandwich(const Matrix<Scalar>& outer,
                                  const Matrix<Scalar>& inner, double lower,
                                  double upper, Index samples,
                                  std::uint64_t seed, double slack = 1e-8) {
  detail::require_same(outer.rows(), inner.rows(), "sampled operator dimensions");
  Rng rng(seed);
  const double scale = std::max({1.0, upper, lower * operator_norm(inner)});
  SampledInequality out;
  out.samples = samples;
  for (Index s = 0; s < samples; ++s) {
    const Vector<Scalar> x = gaussian_vector<Scalar>(outer.rows(), rng);
    const double nn = x.squaredNorm();
    const double form = std::real(x.dot(outer * x));
    const double inner_form = std::real(x.dot(inner * x));
    const double lower_margin = (form - lower * inner_form) / (scale * nn);
    const double upper_margin = (upper * nn - form) / (scale * nn);
    const double margin = std::min(lower_margin, upper_margin);
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < -slack) ++out.violations;
    if (inner_form > 0) out.min_ratio = std::min(out.min_ratio, form / inner_form);
  }
  return out;
}

/// Definition check of the K-frame inequality for given (A, B) on random f.
template <class Scalar>
SampledInequality sample_kframe_inequality(const FrameSequence<Scalar>& f,
                                           const Matrix<Scalar>& k, double a,
                                           double b, Index samples,
                                           std::uint64_t seed,
                                           double slack = 1e-8) {
  const Matrix<Scalar> kk = k * k.adjoint();
  return sample_sandwich<Scalar>(frame_operator(f), kk, a, b, samples, seed,
                                 slack);
}

struct AtomicReport {
  double constant = 0;              // smallest C with ||a_x|| <= C ||x||
  double coefficient_map_norm = 0;  // ||T^+ K||
  double max_residual = 0;          // sampled ||T a_x - K x|| / (||K|| ||x||)
};

/// Minimal-norm atomic coefficients a_x = T^+ K x.
template <class Scalar>
AtomicReport atomic_system_constant(const FrameSequence<Scalar>& f,
                                    const Matrix<Scalar>& k,
                                    const Tolerances& tol = {},
                                    std::uint64_t seed = 0) {
  detail::require_square(k, "K");
  detail::require_same(k.rows(), f.dim(), "K versus frame dimension");
  const auto& t = f.synthesis_matrix();
  const Matrix<Scalar> coeff_map = pseudo_inverse(t, tol) * k;
  const Matrix<Scalar> defect = k - t * coeff_map;
  const double k_norm = operator_norm(k);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(defect, Eigen::ComputeThinV);
  if (double(svd.singularValues()(0)) > tol.rel_eq * std::max(1.0, k_norm))
    throw Error(ErrorKind::RangeDeficiency,
                "K x is not representable by the frame for some x",
                svd.matrixV().col(0));

  AtomicReport out;
  out.coefficient_map_norm = operator_norm(coeff_map);
  out.constant = out.coefficient_map_norm;
  Rng rng(seed);
  for (int s = 0; s < 100; ++s) {
    const Vector<Scalar> x = gaussian_vector<Scalar>(f.dim(), rng);
    const Vector<Scalar> a = coeff_map * x;
    const double res = (synthesis(f, a) - k * x).norm() /
                       (std::max(k_norm, 1e-300) * x.norm());
    out.max_residual = std::max(out.max_residual, res);
  }
  return out;
}

/// K f = sum <f, g_n> f_n for all f, i.e. K = F G^*.
template <class Scalar>
bool bessel_dual_check(const FrameSequence<Scalar>& f,
                       const FrameSequence<Scalar>& g, const Matrix<Scalar>& k,
                       const Tolerances& tol = {}) {
  detail::require_same(f.dim(), g.dim(), "frame dimensions");
  detail::require_same(f.count(), g.count(), "frame counts");
  detail::require_square(k, "K");
  detail::require_same(k.rows(), f.dim(), "K versus frame dimension");
  const Matrix<Scalar> diff =
      k - f.synthesis_matrix() * g.synthesis_matrix().adjoint();
  return double(diff.norm()) <= tol.rel_eq * std::max(1.0, double(k.norm()));
}

/// Largest defect of K = F G^* and the unit f attaining it.
template <class Scalar>
std::pair<double, Vector<Scalar>> bessel_dual_defect(
    const FrameSequence<Scalar>& f, const FrameSequence<Scalar>& g,
    const Matrix<Scalar>& k) {
  const Matrix<Scalar> diff =
      k - f.synthesis_matrix() * g.synthesis_matrix().adjoint();
  Eigen::JacobiSVD<Matrix<Scalar>> svd(diff, Eigen::ComputeThinV);
  return {double(svd.singularValues()(0)), svd.matrixV().col(0)};
}

/// h_n = (K^+)^* g_n. With K = F G^*, {f_n} and {h_n} reconstruct every
/// f in R(K) in either order.
template <class Scalar>
FrameSequence<Scalar> interchange_dual(const FrameSequence<Scalar>& f,
                                       const FrameSequence<Scalar>& g,
                                       const Matrix<Scalar>& k,
                                       const Tolerances& tol = {}) {
  if (!bessel_dual_check(f, g, k, tol)) {
    const auto [norm, witness] = bessel_dual_defect(f, g, k);
    throw Error(ErrorKind::PreconditionFailed,
                "K f = sum <f, g_n> f_n fails (defect " + std::to_string(norm) + ")",
                witness);
  }
  return FrameSequence<Scalar>(pseudo_inverse(k, tol).adjoint() *
                               g.synthesis_matrix());
}

struct ReconstructionResiduals {
  double synthesis_side = 0;  // max ||f - sum <f, h_n> f_n|| / ||f||
  double analysis_side = 0;   // max ||f - sum <f, f_n> h_n|| / ||f||
};

/// Samples f = K y in R(K) and measures both reconstruction orders.
template <class Scalar>
ReconstructionResiduals interchange_residuals(const FrameSequence<Scalar>& f,
                                              const FrameSequence<Scalar>& h,
                                              const Matrix<Scalar>& k,
                                              Index samples,
                                              std::uint64_t seed) {
  ReconstructionResiduals out;
  Rng rng(seed);
  const auto& fm = f.synthesis_matrix();
  const auto& hm = h.synthesis_matrix();
  for (Index s = 0; s < samples; ++s) {
    const Vector<Scalar> x = k * gaussian_vector<Scalar>(k.cols(), rng);
    const double nx = x.norm();
    if (nx == 0) continue;
    const Vector<Scalar> via_h = fm * (hm.adjoint() * x);
    const Vector<Scalar> via_f = hm * (fm.adjoint() * x);
    out.synthesis_side = std::max(out.synthesis_side, double((x - via_h).norm()) / nx);
    out.analysis_side = std::max(out.analysis_side, double((x - via_f).norm()) / nx);
  }
  return out;
}

/// {K f_n} for an ordinary frame {f_n}.
template <class Scalar>
FrameSequence<Scalar> kframe_from_frame(const FrameSequence<Scalar>& f,
                                        const Matrix<Scalar>& k,
                                        const Tolerances& tol = {}) {
  detail::require_square(k, "K");
  detail::require_same(k.rows(), f.dim(), "K versus frame dimension");
  if (!frame_bounds(f, tol).is_frame())
    throw Error(ErrorKind::PreconditionFailed, "source is not a frame for H");
  return FrameSequence<Scalar>(k * f.synthesis_matrix());
}

/// {K e_n} for an orthonormal basis {e_n}.
template <class Scalar>
FrameSequence<Scalar> kframe_from_orthonormal(const FrameSequence<Scalar>& e,
                                              const Matrix<Scalar>& k,
                                              const Tolerances& tol = {}) {
  detail::require_square(k, "K");
  detail::require_same(k.rows(), e.dim(), "K versus basis dimension");
  const auto& m = e.synthesis_matrix();
  const Index n = e.count();
  const double defect =
      (m.adjoint() * m - Matrix<Scalar>::Identity(n, n)).norm();
  if (n != e.dim() || defect > tol.rel_eq * std::sqrt(double(n)))
    throw Error(ErrorKind::NotOrthonormal, "source is not an orthonormal basis");
  return FrameSequence<Scalar>(k * m);
}

/// {T f_n}; a K-frame maps to a TK-frame.
template <class Scalar>
FrameSequence<Scalar> transformed_frame(const FrameSequence<Scalar>& f,
                                        const Matrix<Scalar>& t) {
  detail::require_square(t, "T");
  detail::require_same(t.rows(), f.dim(), "T versus frame dimension");
  return FrameSequence<Scalar>(t * f.synthesis_matrix());
}

/// Worst normalized margins of the bounds of S on R(K) and of its inverse
/// on S(R(K)); a negative margin beyond the slack is a violation.
struct RestrictedReport {
  bool holds = true;
  Index samples = 0;
  double lower_margin = 0;        // ||Sf|| - A ||K^+||^-2 ||f||
  double upper_margin = 0;        // B ||f|| - ||Sf||
  double inverse_lower_margin = 0;  // ||S^-1 g|| - ||g|| / B
  double inverse_upper_margin = 0;  // A^-1 ||K^+||^2 ||g|| - ||S^-1 g||
  double adjoint_margin = 0;      // ||K^* f||^2 - ||K^+||^-2 ||f||^2
};

template <class Scalar>
RestrictedReport restricted_operator_inequalities(
    const FrameSequence<Scalar>& f, const Matrix<Scalar>& k,
    const Tolerances& tol = {}, Index samples = 500, std::uint64_t seed = 0) {
  const auto report = kframe_check(f, k, tol);
  if (!report.is_kframe || report.vacuous)
    throw Error(ErrorKind::PreconditionFailed,
                "restricted bounds need a K-frame with rank K >= 1");
  const double a = report.lower_opt;
  const double b = report.upper_opt;
  const double kpinv = operator_norm(pseudo_inverse(k, tol));
  const double c = 1.0 / (kpinv * kpinv);
  const Matrix<Scalar> s = frame_operator(f);
  const Matrix<Scalar> s_pinv = pseudo_inverse(s, tol);
  const double k_norm = operator_norm(k);

  RestrictedReport out;
  out.samples = samples;
  const double inf = std::numeric_limits<double>::infinity();
  out.lower_margin = out.upper_margin = out.inverse_lower_margin =
      out.inverse_upper_margin = out.adjoint_margin = inf;
  Rng rng(seed);
  for (Index i = 0; i < samples; ++i) {
    Vector<Scalar> x = k * gaussian_vector<Scalar>(k.cols(), rng);
    if (x.norm() == 0) continue;
    x /= x.norm();
    const Vector<Scalar> sx = s * x;
    const double nsx = sx.norm();
    const double fwd_scale = std::max(1.0, b);
    out.lower_margin = std::min(out.lower_margin, (nsx - a * c) / fwd_scale);
    out.upper_margin = std::min(out.upper_margin, (b - nsx) / fwd_scale);

    const Vector<Scalar> back = s_pinv * sx;
    const double nb = back.norm();
    const double inv_scale = std::max(1.0, 1.0 / (a * c)) * nsx;
    out.inverse_lower_margin =
        std::min(out.inverse_lower_margin, (nb - nsx / b) / inv_scale);
    out.inverse_upper_margin =
        std::min(out.inverse_upper_margin, (nsx / (a * c) - nb) / inv_scale);

    const double kstar = (k.adjoint() * x).squaredNorm();
    out.adjoint_margin = std::min(
        out.adjoint_margin, (kstar - c) / std::max(1.0, k_norm * k_norm));
  }
  const double eps = tol.psd_slack;
  out.holds = out.lower_margin >= -eps && out.upper_margin >= -eps &&
              out.inverse_lower_margin >= -eps &&
              out.inverse_upper_margin >= -eps && out.adjoint_margin >= -eps;
  return out;
}

}  // namespace kframe

#endif  // KFRAME_KFRAMES_HPP
