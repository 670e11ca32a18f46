#include <kframe/io.hpp>

#include <fstream>
#include <sstream>

namespace kframe::io {

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw Error(ErrorKind::ParseError, context + ": " + what);
}

json scalar_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx scalar_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(where, "expected a [re, im] pair of numbers");
  const cplx z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    fail(where, "entries must be finite");
  return z;
}

Index read_dim(const json& j, const std::string& context) {
  if (!j.is_object()) fail(context, "expected a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    fail(context, "\"dim\" must be a positive integer");
  return Index(j["dim"].get<long long>());
}

VectorXc read_entries(const json& arr, Index expected, const std::string& where) {
  if (!arr.is_array()) fail(where, "expected an array");
  if (Index(arr.size()) != expected)
    fail(where, "expected " + std::to_string(expected) + " entries, got " +
                    std::to_string(arr.size()));
  VectorXc v(expected);
  for (Index i = 0; i < expected; ++i)
    v(i) = scalar_from_json(arr[std::size_t(i)], where + "[" + std::to_string(i) + "]");
  return v;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json vector_field(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json witness_json(const VectorXc& w) {
  json out = json::array();
  for (Index i = 0; i < w.size(); ++i) out.push_back(scalar_to_json(w(i)));
  return out;
}

json finite_or_null(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

}  // namespace

json operator_to_json(const MatrixXc& m) {
  json entries = json::array();
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) entries.push_back(scalar_to_json(m(i, j)));
  return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

json vector_to_json(const VectorXc& v) {
  json entries = json::array();
  for (Index i = 0; i < v.size(); ++i) entries.push_back(scalar_to_json(v(i)));
  return {{"dim", v.size()}, {"entries", std::move(entries)}};
}

json frame_to_json(const FrameSequence<cplx>& f) {
  json vectors = json::array();
  for (Index j = 0; j < f.count(); ++j) {
    json col = json::array();
    for (Index i = 0; i < f.dim(); ++i)
      col.push_back(scalar_to_json(f.synthesis_matrix()(i, j)));
    vectors.push_back(std::move(col));
  }
  return {{"dim", f.dim()}, {"vectors", std::move(vectors)}};
}

MatrixXc operator_from_json(const json& j, const std::string& context) {
  const Index d = read_dim(j, context);
  if (!j.contains("entries")) fail(context, "missing \"entries\"");
  const VectorXc flat = read_entries(j["entries"], d * d, context + ": entries");
  return Eigen::Map<const MatrixXc>(flat.data(), d, d);
}

VectorXc vector_from_json(const json& j, const std::string& context) {
  const Index d = read_dim(j, context);
  if (!j.contains("entries")) fail(context, "missing \"entries\"");
  return read_entries(j["entries"], d, context + ": entries");
}

FrameSequence<cplx> frame_from_json(const json& j, const std::string& context) {
  const Index d = read_dim(j, context);
  if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].empty())
    fail(context, "\"vectors\" must be a non-empty array");
  const auto& vectors = j["vectors"];
  MatrixXc m(d, Index(vectors.size()));
  for (std::size_t n = 0; n < vectors.size(); ++n)
    m.col(Index(n)) =
        read_entries(vectors[n], d, context + ": vectors[" + std::to_string(n) + "]");
  return FrameSequence<cplx>(std::move(m));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line) + ":" +
                                           std::to_string(col) + ": malformed JSON");
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, path + ": cannot write file");
  out << text;
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

MatrixXc load_operator(const std::string& path) {
  return operator_from_json(read_json_file(path), path);
}

VectorXc load_vector(const std::string& path) {
  return vector_from_json(read_json_file(path), path);
}

FrameSequence<cplx> load_frame(const std::string& path) {
  return frame_from_json(read_json_file(path), path);
}

json to_json(const Tolerances& tol) {
  return {{"rel_eq", tol.rel_eq},
          {"psd_slack", tol.psd_slack},
          {"rank_rel", tol.rank_rel ? json(*tol.rank_rel) : json("1e-12*d")}};
}

json to_json(const FrameBounds& b) {
  json out{{"is_frame", b.is_frame()}, {"bessel_bound", b.bessel}};
  if (b.frame) {
    out["lower"] = b.frame->lower;
    out["upper"] = b.frame->upper;
  }
  return out;
}

json to_json(const KFrameReport<cplx>& r) {
  return {{"is_bessel", r.is_bessel},
          {"is_kframe", r.is_kframe},
          {"vacuous", r.vacuous},
          {"range_contained", r.range_contained},
          {"lower_opt", finite_or_null(r.lower_opt)},
          {"upper_opt", r.upper_opt},
          {"rank_k", r.rank_k},
          {"worst_rayleigh_witness", witness_json(r.worst_rayleigh_witness)}};
}

json to_json(const ControlledReport<cplx>& r) {
  return {{"commutes_with_k", r.commutes_with_k},
          {"form_is_real", r.form_is_real},
          {"is_controlled_kframe", r.is_controlled_kframe},
          {"vacuous", r.vacuous},
          {"lower_opt", finite_or_null(r.lower_opt)},
          {"upper_opt", r.upper_opt},
          {"rank_k", r.rank_k},
          {"witness", witness_json(r.witness)}};
}

json to_json(const AtomicReport& r) {
  return {{"constant", r.constant},
          {"coefficient_map_norm", r.coefficient_map_norm},
          {"max_residual", r.max_residual}};
}

json to_json(const RestrictedReport& r) {
  return {{"holds", r.holds},
          {"samples", r.samples},
          {"lower_margin", finite_or_null(r.lower_margin)},
          {"upper_margin", finite_or_null(r.upper_margin)},
          {"inverse_lower_margin", finite_or_null(r.inverse_lower_margin)},
          {"inverse_upper_margin", finite_or_null(r.inverse_upper_margin)},
          {"adjoint_margin", finite_or_null(r.adjoint_margin)}};
}

json to_json(const ConvergenceTrace& t) {
  return {{"iterations", t.iterations},
          {"converged", t.converged},
          {"empirical_rate", t.empirical_rate},
          {"relaxation", t.relaxation},
          {"kappa_report", t.kappa_report},
          {"residuals", vector_field(Eigen::Map<const Eigen::VectorXd>(
                            t.residuals.data(), Index(t.residuals.size())))}};
}

}  // namespace kframe::io
