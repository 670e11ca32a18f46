#include <kframe/recon.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <thread>

namespace kframe {

namespace {

constexpr std::pair<InstanceKind, std::string_view> kKindNames[] = {
    {InstanceKind::random_frame, "random-frame"},
    {InstanceKind::ill_conditioned, "ill-conditioned"},
    {InstanceKind::commuting_family, "commuting-family"},
    {InstanceKind::paper_c3, "paper-c3"},
};

constexpr std::pair<ControllerChoice, std::string_view> kChoiceNames[] = {
    {ControllerChoice::instance, "instance"},
    {ControllerChoice::identity, "identity"},
    {ControllerChoice::exact_inverse, "exact-inverse"},
    {ControllerChoice::diagonal_approx, "diagonal-approx"},
};

MatrixXc identity(Index d) { return MatrixXc::Identity(d, d); }

MatrixXc symmetrized(const MatrixXc& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

std::string_view to_string(InstanceKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

InstanceKind parse_instance_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw Error(ErrorKind::InvalidParameters,
              "unknown instance kind '" + std::string(name) + "'");
}

std::string_view to_string(ControllerChoice choice) {
  for (const auto& [c, name] : kChoiceNames)
    if (c == choice) return name;
  return "unknown";
}

ControllerChoice parse_controller_choice(std::string_view name) {
  for (const auto& [c, n] : kChoiceNames)
    if (n == name) return c;
  throw Error(ErrorKind::InvalidParameters,
              "unknown controller choice '" + std::string(name) + "'");
}

MatrixXc approximate_inverse(const MatrixXc& s, Rng& rng) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(symmetrized(s));
  Eigen::VectorXd diag = eig.eigenvalues();
  for (Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0))
      throw Error(ErrorKind::NotPositiveDefinite,
                  "approximate inverse needs a positive definite operator");
    diag(i) = uniform(0.5, 2.0, rng) / diag(i);
  }
  return symmetrized(eig.eigenvectors() * diag.asDiagonal() *
                     eig.eigenvectors().adjoint());
}

Instance paper_c3_instance() {
  MatrixXc f = MatrixXc::Zero(3, 3);
  f(0, 0) = 1;  // e1
  f(0, 1) = 1;  // e1
  f(1, 2) = 1;  // e2
  MatrixXc k = f;  // K e_j = f_j
  return Instance{FrameSequence<cplx>(f), k, Controller<cplx>(identity(3))};
}

Instance generate_instance(InstanceKind kind, Index dim, Index n,
                           double cond_target, std::uint64_t seed) {
  if (kind == InstanceKind::paper_c3) return paper_c3_instance();
  if (dim < 1 || n < dim)
    throw Error(ErrorKind::InvalidParameters,
                "frame instances need dim >= 1 and n >= dim");
  Rng rng(seed);

  switch (kind) {
    case InstanceKind::random_frame: {
      FrameSequence<cplx> frame(gaussian_matrix<cplx>(dim, n, rng));
      return Instance{frame, identity(dim), Controller<cplx>(identity(dim))};
    }
    case InstanceKind::ill_conditioned: {
      if (!(cond_target >= 1) || !std::isfinite(cond_target))
        throw Error(ErrorKind::InvalidParameters, "cond_target must be >= 1");
      // Singular values geometric from 1 down to cond^{-1/2}.
      Eigen::VectorXd sigma(dim);
      for (Index i = 0; i < dim; ++i) {
        const double t = dim == 1 ? 0.0 : double(i) / double(dim - 1);
        sigma(i) = std::pow(cond_target, -0.5 * t);
      }
      const MatrixXc w = random_parseval<cplx>(dim, n, rng);
      FrameSequence<cplx> frame(sigma.cast<cplx>().asDiagonal() * w);
      MatrixXc c = MatrixXc::Zero(dim, dim);
      for (Index i = 0; i < dim; ++i)
        c(i, i) = uniform(0.5, 2.0, rng) / (sigma(i) * sigma(i));
      return Instance{frame, identity(dim), Controller<cplx>(c)};
    }
    case InstanceKind::commuting_family: {
      FrameSequence<cplx> frame(gaussian_matrix<cplx>(dim, n, rng));
      Eigen::SelfAdjointEigenSolver<MatrixXc> eig(symmetrized(frame_operator(frame)));
      const MatrixXc& u = eig.eigenvectors();
      const Eigen::VectorXd& s = eig.eigenvalues();  // ascending
      Eigen::VectorXd kd(dim);
      for (Index i = 0; i < dim; ++i)
        kd(i) = uniform(0.5, 1.5, rng) * std::sqrt(std::max(s(i), 0.0));
      kd(0) = 0;
      if (dim >= 3 && uniform(0.0, 1.0, rng) < 0.5) kd(1) = 0;
      const double scale = uniform(0.5, 2.0, rng);
      Eigen::VectorXd cd(dim);
      for (Index i = 0; i < dim; ++i) cd(i) = scale / (s(i) + 1.0);
      MatrixXc k = u * kd.cast<cplx>().asDiagonal() * u.adjoint();
      MatrixXc c = symmetrized(u * cd.cast<cplx>().asDiagonal() * u.adjoint());
      return Instance{frame, k, Controller<cplx>(c)};
    }
    case InstanceKind::paper_c3:
      break;
  }
  return paper_c3_instance();
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

double condition_of(const MatrixXc& op) {
  const Eigen::VectorXd l = hermitian_eigenvalues(op);
  const double lo = l(0);
  const double hi = l(l.size() - 1);
  if (!(lo > 0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

BenchRow run_cell(InstanceKind kind, Index dim, double cond, Index trial,
                  const BenchConfig& cfg, std::uint64_t seed) {
  BenchRow row;
  row.instance_id = std::string(to_string(kind)) + "-d" + std::to_string(dim) +
                    "-c" + format_double(cond) + "-t" + std::to_string(trial);
  row.cond_s = row.cond_precond = std::numeric_limits<double>::quiet_NaN();
  row.speedup = std::numeric_limits<double>::quiet_NaN();
  try {
    const Instance inst =
        generate_instance(kind, dim, cfg.vectors_per_dim * dim, cond, seed);
    row.dim = inst.frame.dim();
    row.n_vectors = inst.frame.count();
    const MatrixXc s = frame_operator(inst.frame);
    row.cond_s = condition_of(s);

    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const VectorXc g = gaussian_vector<cplx>(row.dim, rng);

    SolverConfig solver = cfg.solver;
    try {
      const auto plain = richardson_solve(s, g, gl_plus_check(s), solver);
      row.iters_plain = plain.trace.iterations;
      row.converged_plain = plain.trace.converged;
    } catch (const Error&) {
      row.converged_plain = false;
    }

    try {
      MatrixXc c;
      switch (cfg.controller) {
        case ControllerChoice::instance: c = inst.controller.op(); break;
        case ControllerChoice::identity: c = identity(row.dim); break;
        case ControllerChoice::exact_inverse:
          gl_plus_check(s);
          c = symmetrized(spectral_apply(s, [](double x) { return 1.0 / x; }));
          break;
        case ControllerChoice::diagonal_approx: c = approximate_inverse(s, rng); break;
      }
      const Controller<cplx> ctrl(c);
      row.cond_precond = condition_of(symmetrized(ctrl.op() * s));
      const auto controlled = controlled_richardson_solve(inst.frame, ctrl, inst.k, g, solver);
      row.iters_controlled = controlled.trace.iterations;
      row.converged_controlled = controlled.trace.converged;
    } catch (const Error&) {
      row.converged_controlled = false;
    }
    if (row.converged_plain && row.converged_controlled && row.iters_controlled > 0)
      row.speedup = double(row.iters_plain) / double(row.iters_controlled);
  } catch (const Error&) {
    row.converged_plain = row.converged_controlled = false;
  }
  return row;
}

}  // namespace

std::vector<BenchRow> run_benchmark(const BenchConfig& cfg) {
  cfg.solver.validate();
  if (cfg.trials < 1 || cfg.vectors_per_dim < 1)
    throw Error(ErrorKind::InvalidParameters, "trials and vectors_per_dim must be >= 1");
  struct Cell {
    InstanceKind kind;
    Index dim;
    double cond;
    Index trial;
  };
  std::vector<Cell> cells;
  for (InstanceKind kind : cfg.kinds)
    for (Index dim : cfg.dims)
      for (double cond : cfg.conds)
        for (Index t = 0; t < cfg.trials; ++t) cells.push_back({kind, dim, cond, t});

  std::vector<BenchRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      rows[i] = run_cell(c.kind, c.dim, c.cond, c.trial, cfg, cfg.solver.seed + i);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, unsigned(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out(bench_csv_header);
  out += '\n';
  for (const auto& r : rows) {
    out += r.instance_id;
    out += ',' + std::to_string(r.dim);
    out += ',' + std::to_string(r.n_vectors);
    out += ',' + format_double(r.cond_s);
    out += ',' + format_double(r.cond_precond);
    out += ',' + std::to_string(r.iters_plain);
    out += ',' + std::to_string(r.iters_controlled);
    out += ',' + format_double(r.speedup);
    out += r.converged_plain ? ",true" : ",false";
    out += r.converged_controlled ? ",true" : ",false";
    out += '\n';
  }
  return out;
}

}  // namespace kframe
