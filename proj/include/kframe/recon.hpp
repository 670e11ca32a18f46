#ifndef KFRAME_RECON_HPP
#define KFRAME_RECON_HPP

// Iterative inversion of the frame operator, plain and with the controller
// as a preconditioner, plus seeded test instances and the benchmark grid.

#include <kframe/controlled.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kframe {

struct SolverConfig {
  std::optional<double> relaxation;  // unset: 2 / (A + B)
  double residual_tol = 1e-8;        // relative
  Index max_iter = 100000;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(residual_tol > 0) || max_iter < 1 || (relaxation && !(*relaxation > 0)))
      throw Error(ErrorKind::InvalidParameters, "invalid solver configuration");
  }
};

struct ConvergenceTrace {
  Index iterations = 0;
  std::vector<double> residuals;  // ||g - S f_k|| / ||g||, k = 1..iterations
  bool converged = false;
  double empirical_rate = 0;  // geometric mean over the last 10 steps
  double relaxation = 0;      // 0 for CG
  // Residuals are always taken on the original system, so the reported
  // residual needs no rescaling.
  double kappa_report = 1;
};

template <class Scalar>
struct SolveResult {
  Vector<Scalar> solution;
  ConvergenceTrace trace;
};

namespace detail {

inline double tail_rate(const std::vector<double>& residuals) {
  const auto k = residuals.size();
  if (k == 0) return 0;
  const std::size_t m = std::min<std::size_t>(10, k);
  const double start = k > m ? residuals[k - 1 - m] : 1.0;
  const double end = residuals[k - 1];
  if (start <= 0 || end <= 0) return 0;
  return std::pow(end / start, 1.0 / double(m));
}

// f_{k+1} = f_k + lambda P (g - S f_k), f_0 = 0.
template <class Scalar, class Precond>
SolveResult<Scalar> richardson_loop(const Matrix<Scalar>& s,
                                    const Vector<Scalar>& g, double lambda,
                                    const SolverConfig& cfg, Precond&& precond) {
  SolveResult<Scalar> out;
  out.solution = Vector<Scalar>::Zero(g.size());
  out.trace.relaxation = lambda;
  const double g_norm = g.norm();
  if (g_norm == 0) {
    out.trace.converged = true;
    return out;
  }
  Vector<Scalar> r = g;
  for (Index it = 1; it <= cfg.max_iter; ++it) {
    out.solution += RealOf<Scalar>(lambda) * precond(r);
    r.noalias() = g - s * out.solution;
    const double res = r.norm() / g_norm;
    out.trace.residuals.push_back(res);
    out.trace.iterations = it;
    if (res <= cfg.residual_tol) {
      out.trace.converged = true;
      break;
    }
    if (!std::isfinite(res)) break;
  }
  out.trace.empirical_rate = tail_rate(out.trace.residuals);
  return out;
}

}  // namespace detail

/// Richardson iteration on a positive definite operator with certified
/// bounds (A, B). Non-convergence is reported through the trace.
template <class Scalar>
SolveResult<Scalar> richardson_solve(const Matrix<Scalar>& op,
                                     const Vector<Scalar>& g,
                                     const OperatorBounds& bounds,
                                     const SolverConfig& cfg = {},
                                     const Tolerances& tol = {}) {
  cfg.validate();
  detail::require_square(op, "operator");
  detail::require_same(op.rows(), g.size(), "right-hand side dimension");
  if (!is_hermitian(op, tol))
    throw Error(ErrorKind::NotHermitian, "Richardson needs a self-adjoint operator");
  if (!(bounds.lower > 0) || !(bounds.upper >= bounds.lower))
    throw Error(ErrorKind::IndefiniteOperator, "Richardson needs 0 < A <= B");
  const double lambda =
      cfg.relaxation.value_or(2.0 / (bounds.lower + bounds.upper));
  return detail::richardson_loop<Scalar>(op, g, lambda, cfg,
                                         [](const Vector<Scalar>& r) { return r; });
}

/// Solves S f = g by Richardson on L_C = C S with right-hand side C g.
template <class Scalar>
SolveResult<Scalar> controlled_richardson_solve(const FrameSequence<Scalar>& f,
                                                const Controller<Scalar>& ctrl,
                                                const Matrix<Scalar>& k,
                                                const Vector<Scalar>& g,
                                                const SolverConfig& cfg = {},
                                                const Tolerances& tol = {}) {
  cfg.validate();
  detail::require_same(g.size(), f.dim(), "right-hand side dimension");
  const Matrix<Scalar> l = detail::validated_controlled_operator(f, k, ctrl, tol);
  const OperatorBounds bounds = gl_plus_check(l, tol);
  const double lambda =
      cfg.relaxation.value_or(2.0 / (bounds.lower + bounds.upper));
  const Matrix<Scalar> s = frame_operator(f);
  const Matrix<Scalar>& c = ctrl.op();
  return detail::richardson_loop<Scalar>(
      s, g, lambda, cfg, [&c](const Vector<Scalar>& r) -> Vector<Scalar> { return c * r; });
}

/// Conjugate gradients for a Hermitian positive definite operator.
template <class Scalar>
SolveResult<Scalar> cg_solve(const Matrix<Scalar>& op, const Vector<Scalar>& g,
                             const SolverConfig& cfg = {},
                             const Tolerances& tol = {}) {
  cfg.validate();
  detail::require_square(op, "operator");
  detail::require_same(op.rows(), g.size(), "right-hand side dimension");
  if (!is_hermitian(op, tol))
    throw Error(ErrorKind::NotHermitian, "CG needs a self-adjoint operator");

  SolveResult<Scalar> out;
  out.solution = Vector<Scalar>::Zero(g.size());
  const double g_norm = g.norm();
  if (g_norm == 0) {
    out.trace.converged = true;
    return out;
  }
  Vector<Scalar> r = g;
  Vector<Scalar> p = r;
  double rho = r.squaredNorm();
  for (Index it = 1; it <= cfg.max_iter; ++it) {
    const Vector<Scalar> q = op * p;
    const double curvature = std::real(p.dot(q));
    if (!(curvature > 0))
      throw Error(ErrorKind::IndefiniteOperator,
                  "non-positive curvature p^* A p = " + std::to_string(curvature), p);
    const double alpha = rho / curvature;
    out.solution += RealOf<Scalar>(alpha) * p;
    r -= RealOf<Scalar>(alpha) * q;
    const double rho_next = r.squaredNorm();
    const double res = std::sqrt(rho_next) / g_norm;
    out.trace.residuals.push_back(res);
    out.trace.iterations = it;
    if (res <= cfg.residual_tol) {
      out.trace.converged = true;
      break;
    }
    p = r + RealOf<Scalar>(rho_next / rho) * p;
    rho = rho_next;
  }
  out.trace.empirical_rate = detail::tail_rate(out.trace.residuals);
  return out;
}

// ---------------------------------------------------------------------------
// Instances and benchmark (complex double).

enum class InstanceKind { random_frame, ill_conditioned, commuting_family, paper_c3 };

std::string_view to_string(InstanceKind kind);
InstanceKind parse_instance_kind(std::string_view name);

struct Instance {
  FrameSequence<cplx> frame;
  MatrixXc k;
  Controller<cplx> controller;
};

/// Seeded instances:
///  random-frame      Gaussian frame, K = I, C = I.
///  ill-conditioned   S = diag(s), s geometric from 1 to 1/cond_target;
///                    K = I, C a diagonal approximation of S^-1.
///  commuting-family  Gaussian frame, C = c (S + I)^-1 and K a spectral
///                    function of S vanishing on the smallest eigenvalue.
///  paper-c3          {e1, e1, e2} in C^3 with Ke1 = e1, Ke2 = e1, Ke3 = e2
///                    and C = I.
Instance generate_instance(InstanceKind kind, Index dim, Index n,
                           double cond_target, std::uint64_t seed);

Instance paper_c3_instance();

/// U diag(rho_i / lambda_i) U^* for S = U diag(lambda) U^*, rho_i drawn
/// uniformly in [0.5, 2]. Diagonal whenever S is.
MatrixXc approximate_inverse(const MatrixXc& s, Rng& rng);

enum class ControllerChoice { instance, identity, exact_inverse, diagonal_approx };

std::string_view to_string(ControllerChoice choice);
ControllerChoice parse_controller_choice(std::string_view name);

struct BenchConfig {
  std::vector<InstanceKind> kinds{InstanceKind::ill_conditioned};
  std::vector<Index> dims{32};
  std::vector<double> conds{1e4};
  Index trials = 1;
  Index vectors_per_dim = 2;  // n = vectors_per_dim * dim
  ControllerChoice controller = ControllerChoice::instance;
  SolverConfig solver;
  unsigned threads = 1;
};

struct BenchRow {
  std::string instance_id;
  Index dim = 0;
  Index n_vectors = 0;
  double cond_s = 0;
  double cond_precond = 0;
  Index iters_plain = 0;
  Index iters_controlled = 0;
  double speedup = 0;
  bool converged_plain = false;
  bool converged_controlled = false;
};

/// Plain versus controlled Richardson on identical right-hand sides, one
/// row per (kind, dim, cond, trial) cell. Cell i uses seed solver.seed + i,
/// so the output does not depend on the thread count.
std::vector<BenchRow> run_benchmark(const BenchConfig& cfg);

inline constexpr std::string_view bench_csv_header =
    "instance_id,dim,n,cond_S,cond_precond,iters_plain,iters_controlled,"
    "speedup,converged_plain,converged_controlled";

/// Locale-independent CSV, newline-terminated rows.
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Shortest round-trip decimal form of x ('.' separator).
std::string format_double(double x);

}  // namespace kframe

#endif  // KFRAME_RECON_HPP
