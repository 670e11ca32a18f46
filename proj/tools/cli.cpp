#include "cli.hpp"

#include <kframe/io.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iomanip>
#include <optional>
#include <sstream>

namespace kframe::cli {

namespace {

using io::json;

struct GlobalOptions {
  double tol_rel = 1e-9;
  double tol_psd = 1e-9;
  std::optional<double> rank_rel;
  std::uint64_t seed = 0;
  bool json_output = false;
  bool deterministic = false;

  Tolerances tolerances() const {
    Tolerances tol;
    tol.rel_eq = tol_rel;
    tol.psd_slack = tol_psd;
    tol.rank_rel = rank_rel;
    tol.validate();
    return tol;
  }
};

struct Context {
  GlobalOptions opts;
  std::ostream& out;     // human-readable text, silenced under --json
  std::ostream& err;
  std::ostream& report;  // JSON reports
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

json manifest(const Context& ctx, const std::string& command,
              const std::vector<std::string>& inputs, const std::string& output,
              int exit_code) {
  json m{{"command", command},
         {"inputs", inputs},
         {"seed", ctx.opts.seed},
         {"tolerances", io::to_json(ctx.opts.tolerances())},
         {"output", output},
         {"exit_code", exit_code}};
  if (!ctx.opts.deterministic) m["timestamp"] = utc_timestamp();
  return m;
}

void emit(Context& ctx, json report, const std::string& command,
          const std::vector<std::string>& inputs, const std::string& output,
          int exit_code) {
  report["manifest"] = manifest(ctx, command, inputs, output, exit_code);
  if (ctx.opts.json_output) ctx.report << report.dump(2) << "\n";
}

std::string fmt(double x) { return format_double(x); }

std::string fmt_vector(const std::vector<cplx>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v[i].real());
    if (v[i].imag() != 0) s += (v[i].imag() < 0 ? "-" : "+") + fmt(std::abs(v[i].imag())) + "i";
  }
  return s + ")";
}

std::vector<cplx> to_std(const VectorXc& v) {
  return std::vector<cplx>(v.data(), v.data() + v.size());
}

bool is_input_error(ErrorKind kind) {
  return kind == ErrorKind::ParseError || kind == ErrorKind::DimensionMismatch ||
         kind == ErrorKind::InvalidParameters;
}

int input_error(Context& ctx, const Error& e) {
  ctx.err << "error: " << e.what() << "\n";
  return kInputError;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string frame, k, c;
  Index samples = 1000;
};

int cmd_check(Context& ctx, const CheckArgs& args) {
  std::vector<std::string> inputs{args.frame};
  const Tolerances tol = ctx.opts.tolerances();
  json report;
  int code = kOk;
  try {
    const auto frame = io::load_frame(args.frame);
    std::optional<MatrixXc> k;
    if (!args.k.empty()) {
      inputs.push_back(args.k);
      k = io::load_operator(args.k);
      detail::require_same(k->rows(), frame.dim(), (args.k + ": K dimension versus frame").c_str());
    }
    std::optional<Controller<cplx>> ctrl;
    if (!args.c.empty()) {
      inputs.push_back(args.c);
      MatrixXc c = io::load_operator(args.c);
      detail::require_same(c.rows(), frame.dim(), (args.c + ": C dimension versus frame").c_str());
      try {
        ctrl.emplace(std::move(c), tol);
      } catch (const Error& e) {
        if (is_input_error(e.kind())) throw;
        report["controller_error"] = e.what();
        ctx.out << "controller rejected: " << e.what() << "\n";
        emit(ctx, report, "check", inputs, "", kPropertyFails);
        return kPropertyFails;
      }
      if (!k) k = MatrixXc::Identity(frame.dim(), frame.dim());
    }

    const FrameBounds fb = frame_bounds(frame, tol);
    report["frame_bounds"] = io::to_json(fb);
    if (fb.is_frame())
      ctx.out << "frame: yes, optimal bounds (" << fmt(fb.frame->lower) << ", "
              << fmt(fb.frame->upper) << ")\n";
    else
      ctx.out << "frame: no (Bessel only), optimal Bessel bound " << fmt(fb.bessel) << "\n";
    bool holds = fb.is_frame();

    if (k) {
      const auto kr = kframe_check(frame, *k, tol);
      report["kframe"] = io::to_json(kr);
      holds = kr.is_kframe;
      if (kr.vacuous) {
        ctx.out << "K-frame: yes (vacuous, rank K = 0), B = " << fmt(kr.upper_opt) << "\n";
      } else if (kr.is_kframe) {
        ctx.out << "K-frame: yes, optimal bounds (" << fmt(kr.lower_opt) << ", "
                << fmt(kr.upper_opt) << "), rank K = " << kr.rank_k << "\n";
        const auto sampled = sample_kframe_inequality(frame, *k, kr.lower_opt,
                                                      kr.upper_opt, args.samples,
                                                      ctx.opts.seed);
        report["kframe_sampling"] = {{"samples", sampled.samples},
                                     {"violations", sampled.violations},
                                     {"worst_margin", sampled.worst_margin}};
      } else {
        ctx.out << "K-frame: no, lower bound fails along "
                << fmt_vector(to_std(kr.worst_rayleigh_witness)) << "\n";
      }
      try {
        report["atomic"] = io::to_json(atomic_system_constant(frame, *k, tol, ctx.opts.seed));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::RangeDeficiency) throw;
        report["atomic"] = {{"range_deficiency", true},
                            {"witness", io::vector_to_json(Eigen::Map<const VectorXc>(
                                            e.witness().data(), Index(e.witness().size())))}};
      }
    }

    if (ctrl) {
      try {
        const auto cr = controlled_kframe_check(frame, *k, *ctrl, tol);
        report["controlled"] = io::to_json(cr);
        holds = cr.is_controlled_kframe;
        if (cr.is_controlled_kframe) {
          ctx.out << "C-controlled K-frame: yes, optimal bounds (" << fmt(cr.lower_opt)
                  << ", " << fmt(cr.upper_opt) << ")\n";
          const BoundPair kb = bounds_to_kframe(cr.lower_opt, cr.upper_opt, *ctrl);
          const BoundPair cb = certified_kframe_bounds(cr.lower_opt, cr.upper_opt, *ctrl);
          const bool kb_valid = kframe_operator_inequality(frame, *k, kb.lower, tol);
          report["transferred_kframe_bounds"] = {
              {"lower", kb.lower}, {"upper", kb.upper}, {"lower_valid", kb_valid}};
          report["certified_kframe_bounds"] = {{"lower", cb.lower}, {"upper", cb.upper}};
          ctx.out << "K-frame bounds from the controlled ones: (" << fmt(cb.lower) << ", "
                  << fmt(cb.upper) << ")";
          if (!kb_valid)
            ctx.out << "; the unscaled transfer A ||C^1/2||^-2 = " << fmt(kb.lower)
                    << " is not a valid lower bound here";
          ctx.out << "\n";
        } else {
          ctx.out << "C-controlled K-frame: no\n";
        }
      } catch (const Error& e) {
        if (is_input_error(e.kind())) throw;
        report["controlled_error"] = e.what();
        ctx.out << "C-controlled K-frame: no (" << e.what() << ")\n";
        holds = false;
      }
    }
    code = holds ? kOk : kPropertyFails;
  } catch (const Error& e) {
    if (!is_input_error(e.kind())) throw;
    return input_error(ctx, e);
  }
  emit(ctx, report, "check", inputs, "", code);
  return code;
}

// ---------------------------------------------------------------------------

struct DualArgs {
  std::string g, k, f, output;
  Index samples = 100;
};

int cmd_dual(Context& ctx, const DualArgs& args) {
  std::vector<std::string> inputs{args.g, args.k};
  const Tolerances tol = ctx.opts.tolerances();
  json report;
  int code = kOk;
  try {
    const auto g = io::load_frame(args.g);
    const MatrixXc k = io::load_operator(args.k);
    detail::require_same(k.rows(), g.dim(), (args.k + ": K dimension versus G").c_str());
    std::optional<FrameSequence<cplx>> f;
    if (!args.f.empty()) {
      inputs.push_back(args.f);
      f = io::load_frame(args.f);
    } else {
      // F = K S_G^{-1} G, which is {K g_n} for a Parseval G.
      const MatrixXc s_g = frame_operator(g);
      try {
        gl_plus_check(s_g, tol);
      } catch (const Error& e) {
        throw Error(ErrorKind::PreconditionFailed,
                    "G is not a frame, pass --f explicitly (" + std::string(e.what()) + ")");
      }
      f.emplace(k * s_g.ldlt().solve(g.synthesis_matrix()));
    }
    const auto h = interchange_dual(*f, g, k, tol);
    const auto res = interchange_residuals(*f, h, k, args.samples, ctx.opts.seed);
    report["dual"] = io::frame_to_json(h);
    report["residuals"] = {{"synthesis_side", res.synthesis_side},
                           {"analysis_side", res.analysis_side},
                           {"samples", args.samples}};
    if (!args.output.empty()) io::write_json_file(args.output, io::frame_to_json(h));
    const bool ok = res.synthesis_side <= 1e-9 && res.analysis_side <= 1e-9;
    ctx.out << "dual written" << (args.output.empty() ? "" : " to " + args.output)
            << "; reconstruction residuals on R(K): " << fmt(res.synthesis_side) << ", "
            << fmt(res.analysis_side) << "\n";
    code = ok ? kOk : kPropertyFails;
  } catch (const Error& e) {
    if (is_input_error(e.kind())) return input_error(ctx, e);
    if (e.kind() != ErrorKind::PreconditionFailed) throw;
    ctx.out << "precondition failed: " << e.what() << "\n";
    if (!e.witness().empty()) ctx.out << "witness f = " << fmt_vector(e.witness()) << "\n";
    report["error"] = e.what();
    report["witness"] = io::vector_to_json(
        Eigen::Map<const VectorXc>(e.witness().data(), Index(e.witness().size())));
    code = kPropertyFails;
  }
  emit(ctx, report, "dual", inputs, args.output, code);
  return code;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string frame, rhs, c, k, output, trace;
  std::string method = "richardson";
  double residual_tol = 1e-8;
  Index max_iter = 100000;
  std::optional<double> relaxation;
};

int cmd_solve(Context& ctx, const SolveArgs& args) {
  std::vector<std::string> inputs{args.frame, args.rhs};
  const Tolerances tol = ctx.opts.tolerances();
  json report;
  int code = kOk;
  try {
    const auto frame = io::load_frame(args.frame);
    const VectorXc g = io::load_vector(args.rhs);
    detail::require_same(g.size(), frame.dim(), (args.rhs + ": right-hand side dimension").c_str());
    if (args.method != "richardson" && args.method != "cg")
      throw Error(ErrorKind::InvalidParameters, "--method must be richardson or cg");
    SolverConfig cfg;
    cfg.residual_tol = args.residual_tol;
    cfg.max_iter = args.max_iter;
    cfg.relaxation = args.relaxation;
    cfg.seed = ctx.opts.seed;
    cfg.validate();

    const MatrixXc s = frame_operator(frame);
    std::optional<Controller<cplx>> ctrl;
    MatrixXc k = MatrixXc::Identity(frame.dim(), frame.dim());
    if (!args.k.empty()) {
      inputs.push_back(args.k);
      k = io::load_operator(args.k);
      detail::require_same(k.rows(), frame.dim(), (args.k + ": K dimension").c_str());
    }
    if (!args.c.empty()) {
      inputs.push_back(args.c);
      ctrl.emplace(io::load_operator(args.c), tol);
      detail::require_same(ctrl->dim(), frame.dim(), (args.c + ": C dimension").c_str());
    }

    try {
      gl_plus_check(s, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotPositiveDefinite && e.kind() != ErrorKind::NotHermitian)
        throw;
      ctx.out << "refused: the frame operator is not positive definite; "
                 "S f = g is only solvable on a subspace\n";
      report["error"] = e.what();
      emit(ctx, report, "solve", inputs, args.output, kPropertyFails);
      return kPropertyFails;
    }

    SolveResult<cplx> result;
    if (args.method == "cg") {
      if (ctrl) {
        const MatrixXc l = controlled_operator(frame, *ctrl);
        result = cg_solve<cplx>(l, ctrl->op() * g, cfg, tol);
      } else {
        result = cg_solve<cplx>(s, g, cfg, tol);
      }
    } else if (ctrl) {
      result = controlled_richardson_solve(frame, *ctrl, k, g, cfg, tol);
    } else {
      result = richardson_solve<cplx>(s, g, gl_plus_check(s, tol), cfg, tol);
    }

    const double direct = (s * result.solution - g).norm() / std::max(g.norm(), 1e-300);
    report["trace"] = io::to_json(result.trace);
    report["solution"] = io::vector_to_json(result.solution);
    report["residual"] = direct;
    code = result.trace.converged ? kOk : kNotConverged;
    if (!args.output.empty()) io::write_json_file(args.output, io::vector_to_json(result.solution));
    if (!args.trace.empty()) {
      json t = io::to_json(result.trace);
      t["manifest"] = manifest(ctx, "solve", inputs, args.output, code);
      io::write_json_file(args.trace, t);
    }
    ctx.out << (result.trace.converged ? "converged" : "NOT converged") << " after "
            << result.trace.iterations << " iterations, residual ||Sf - g||/||g|| = "
            << fmt(direct) << ", rate " << fmt(result.trace.empirical_rate) << "\n";
  } catch (const Error& e) {
    if (is_input_error(e.kind())) return input_error(ctx, e);
    ctx.out << "solve failed: " << e.what() << "\n";
    report["error"] = e.what();
    code = kPropertyFails;
  }
  emit(ctx, report, "solve", inputs, args.output, code);
  return code;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> kinds{"ill-conditioned"};
  std::vector<Index> dims{32};
  std::vector<double> conds{1e4};
  Index trials = 1;
  Index vectors_per_dim = 2;
  std::string controller = "instance";
  unsigned threads = 1;
  double residual_tol = 1e-8;
  Index max_iter = 100000;
  std::string output;
};

int cmd_bench(Context& ctx, const BenchArgs& args) {
  BenchConfig cfg;
  try {
    cfg.kinds.clear();
    for (const auto& k : args.kinds) cfg.kinds.push_back(parse_instance_kind(k));
    cfg.dims = args.dims;
    cfg.conds = args.conds;
    cfg.trials = args.trials;
    cfg.vectors_per_dim = args.vectors_per_dim;
    cfg.controller = parse_controller_choice(args.controller);
    cfg.threads = args.threads;
    cfg.solver.residual_tol = args.residual_tol;
    cfg.solver.max_iter = args.max_iter;
    cfg.solver.seed = ctx.opts.seed;
    const auto rows = run_benchmark(cfg);
    const std::string csv = bench_csv(rows);
    if (args.output.empty()) {
      ctx.out << csv;
    } else {
      io::write_text_file(args.output, csv);
      ctx.out << rows.size() << " rows written to " << args.output << "\n";
    }
    emit(ctx, json{{"rows", rows.size()}}, "bench", {}, args.output, kOk);
  } catch (const Error& e) {
    return input_error(ctx, e);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_paper_example(Context& ctx) {
  const Tolerances tol = ctx.opts.tolerances();
  const Instance inst = paper_c3_instance();
  const auto& f = inst.frame;
  const MatrixXc& k = inst.k;
  const FrameSequence<cplx> g(MatrixXc::Identity(3, 3));
  auto& out = ctx.out;
  json report;
  bool ok = true;

  out << "H = C^3, g_n = e_n, K e1 = e1, K e2 = e1, K e3 = e2, f_n = K g_n = {e1, e1, e2}\n";

  const double forward = (k - f.synthesis_matrix() * g.synthesis_matrix().adjoint()).norm();
  const bool a = forward <= 1e-15;
  ok &= a;
  out << "(a) K f = sum <f, g_n> f_n for all f: ||K - F G^*||_F = " << fmt(forward)
      << (a ? "  [holds]" : "  [FAILS]") << "\n";

  VectorXc e3 = VectorXc::Zero(3);
  e3(2) = 1;
  const VectorXc lhs = k * e3;
  const VectorXc rhs = g.synthesis_matrix() * (f.synthesis_matrix().adjoint() * e3);
  const double diff = (lhs - rhs).norm();
  const bool b = lhs.isApprox(VectorXc::Unit(3, 1)) && rhs.norm() == 0 && diff == 1;
  ok &= b;
  out << "(b) swapped roles: K e3 = " << fmt_vector(to_std(lhs))
      << " but sum <e3, f_n> g_n = " << fmt_vector(to_std(rhs))
      << ", difference norm " << fmt(diff) << (b ? "  [as claimed]" : "  [FAILS]") << "\n";
  out << "    bessel_dual_check(F, G, K) = " << bessel_dual_check(f, g, k, tol)
      << ", swapped = " << bessel_dual_check(g, f, k, tol) << "\n";

  const auto kr = kframe_check(f, k, tol);
  const MatrixXc s = frame_operator(f);
  const MatrixXc kk = k * k.adjoint();
  Eigen::VectorXd diag(3);
  diag << 2, 1, 0;
  const bool c = kr.is_kframe && std::abs(kr.lower_opt - 1) <= 1e-12 &&
                 std::abs(kr.upper_opt - 2) <= 1e-12 &&
                 (s - kk).norm() == 0 &&
                 (s - diag.cast<cplx>().asDiagonal().toDenseMatrix()).norm() == 0;
  ok &= c;
  out << "(c) S = K K^* = diag(2, 1, 0); optimal K-frame bounds (" << fmt(kr.lower_opt)
      << ", " << fmt(kr.upper_opt) << ")" << (c ? "  [holds]" : "  [FAILS]") << "\n";

  const auto h = interchange_dual(f, g, k, tol);
  const auto res = interchange_residuals(f, h, k, 100, ctx.opts.seed);
  out << "    interchange dual h_n = (K^+)^* g_n reconstructs R(K) with residuals "
      << fmt(res.synthesis_side) << ", " << fmt(res.analysis_side) << "\n";

  report["forward_identity_defect"] = forward;
  report["swapped"] = {{"k_e3", io::vector_to_json(lhs)},
                       {"sum", io::vector_to_json(rhs)},
                       {"difference_norm", diff}};
  report["kframe"] = io::to_json(kr);
  report["interchange_residuals"] = {{"synthesis_side", res.synthesis_side},
                                     {"analysis_side", res.analysis_side}};
  report["all_assertions_hold"] = ok;
  const int code = ok ? kOk : kPropertyFails;
  if (!ok) ctx.err << "AssertionFailure: paper example regression\n";
  emit(ctx, report, "paper-example", {}, "", code);
  return code;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  Index dim = 4;
  Index n = 8;
  double cond = 1e2;
  std::string prefix = "instance";
};

int cmd_gen(Context& ctx, const GenArgs& args) {
  try {
    const Instance inst =
        generate_instance(parse_instance_kind(args.kind), args.dim, args.n, args.cond, ctx.opts.seed);
    Rng rng(ctx.opts.seed ^ 0x5bd1e995ULL);
    const VectorXc g = gaussian_vector<cplx>(inst.frame.dim(), rng);
    const std::vector<std::string> written{args.prefix + "_frame.json", args.prefix + "_k.json",
                                           args.prefix + "_c.json", args.prefix + "_rhs.json"};
    io::write_json_file(written[0], io::frame_to_json(inst.frame));
    io::write_json_file(written[1], io::operator_to_json(inst.k));
    io::write_json_file(written[2], io::operator_to_json(inst.controller.op()));
    io::write_json_file(written[3], io::vector_to_json(g));
    for (const auto& w : written) ctx.out << "wrote " << w << "\n";
    emit(ctx, json{{"files", written}}, "gen", {}, args.prefix, kOk);
  } catch (const Error& e) {
    return input_error(ctx, e);
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  GlobalOptions opts;
  CLI::App app{"K-frame and controlled K-frame toolkit"};
  app.name("kframe");
  app.require_subcommand(1);

  auto& o = opts;
  app.add_option("--tol-rel", o.tol_rel, "relative tolerance for operator equality")
      ->capture_default_str();
  app.add_option("--tol-psd", o.tol_psd, "slack for operator-order tests")->capture_default_str();
  app.add_option("--rank-rel", o.rank_rel, "relative numerical-rank cutoff (default 1e-12*d)");
  app.add_option("--seed", o.seed, "seed for sampling and generators")->capture_default_str();
  app.add_flag("--json", o.json_output, "print a JSON report with the run manifest");
  app.add_flag("--deterministic", o.deterministic, "omit the timestamp from reports");

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "frame / K-frame / controlled K-frame verdicts");
  check->add_option("frame", check_args.frame, "frame sequence JSON")->required();
  check->add_option("--k", check_args.k, "operator K (JSON)");
  check->add_option("--c", check_args.c, "controller C (JSON); implies K = I if --k is absent");
  check->add_option("--samples", check_args.samples, "Rayleigh samples")->capture_default_str();

  DualArgs dual_args;
  auto* dual = app.add_subcommand("dual", "interchange dual h_n = (K^+)^* g_n");
  dual->add_option("g", dual_args.g, "frame G (JSON)")->required();
  dual->add_option("--k", dual_args.k, "operator K (JSON)")->required();
  dual->add_option("--f", dual_args.f, "frame F with K = sum <., g_n> f_n (default K S_G^-1 G)");
  dual->add_option("-o,--out", dual_args.output, "output file for the dual frame");
  dual->add_option("--samples", dual_args.samples, "samples in R(K)")->capture_default_str();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "solve S f = g iteratively");
  solve->add_option("frame", solve_args.frame, "frame sequence JSON")->required();
  solve->add_option("rhs", solve_args.rhs, "right-hand side vector JSON")->required();
  solve->add_option("--c", solve_args.c, "controller C used as preconditioner");
  solve->add_option("--k", solve_args.k, "operator K commuting with C (default I)");
  solve->add_option("--method", solve_args.method, "richardson or cg")->capture_default_str();
  solve->add_option("--residual-tol", solve_args.residual_tol)->capture_default_str();
  solve->add_option("--max-iter", solve_args.max_iter)->capture_default_str();
  solve->add_option("--relaxation", solve_args.relaxation, "Richardson step (default 2/(A+B))");
  solve->add_option("-o,--out", solve_args.output, "output file for the solution vector");
  solve->add_option("--trace", solve_args.trace, "output file for the convergence trace");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "plain vs controlled Richardson benchmark (CSV)");
  bench->add_option("--kinds", bench_args.kinds, "instance kinds")->delimiter(',')->capture_default_str();
  bench->add_option("--dims", bench_args.dims)->delimiter(',')->capture_default_str();
  bench->add_option("--conds", bench_args.conds)->delimiter(',')->capture_default_str();
  bench->add_option("--trials", bench_args.trials)->capture_default_str();
  bench->add_option("--vectors-per-dim", bench_args.vectors_per_dim)->capture_default_str();
  bench->add_option("--controller", bench_args.controller,
                    "instance, identity, exact-inverse or diagonal-approx")
      ->capture_default_str();
  bench->add_option("--threads", bench_args.threads)->capture_default_str();
  bench->add_option("--residual-tol", bench_args.residual_tol)->capture_default_str();
  bench->add_option("--max-iter", bench_args.max_iter)->capture_default_str();
  bench->add_option("-o,--out", bench_args.output, "CSV output (stdout if absent)");

  auto* paper = app.add_subcommand("paper-example", "reproduce the C^3 counterexample");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "write a generated instance to JSON files");
  gen->add_option("kind", gen_args.kind,
                  "random-frame, ill-conditioned, commuting-family or paper-c3")
      ->required();
  gen->add_option("--dim", gen_args.dim)->capture_default_str();
  gen->add_option("--n", gen_args.n)->capture_default_str();
  gen->add_option("--cond", gen_args.cond)->capture_default_str();
  gen->add_option("--prefix", gen_args.prefix, "output file prefix")->capture_default_str();

  for (auto* sub : {check, dual, solve, bench, paper, gen}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  std::ostream silent(nullptr);
  Context ctx{opts, opts.json_output ? silent : out, err, out};
  try {
    ctx.opts.tolerances();
    if (*check) return cmd_check(ctx, check_args);
    if (*dual) return cmd_dual(ctx, dual_args);
    if (*solve) return cmd_solve(ctx, solve_args);
    if (*bench) return cmd_bench(ctx, bench_args);
    if (*paper) return cmd_paper_example(ctx);
    if (*gen) return cmd_gen(ctx, gen_args);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.kind()) ? kInputError : kPropertyFails;
  }
  return kInputError;
}

}  // namespace kframe::cli
