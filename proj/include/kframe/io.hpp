#ifndef KFRAME_IO_HPP
#define KFRAME_IO_HPP

// JSON file formats.
//
//   operator / vector : {"dim": d, "entries": [[re, im], ...]}
//                       column-major, d*d (operator) or d (vector) pairs
//   frame sequence    : {"dim": d, "vectors": [[[re, im], ...], ...]}
//
// Doubles are written in shortest round-trip form, so write followed by
// read reproduces every entry exactly.

#include <kframe/recon.hpp>

#include <json.hpp>

#include <string>

namespace kframe::io {

using json = nlohmann::json;

json operator_to_json(const MatrixXc& m);
json vector_to_json(const VectorXc& v);
json frame_to_json(const FrameSequence<cplx>& f);

// `context` prefixes diagnostics (usually the file name).
MatrixXc operator_from_json(const json& j, const std::string& context = "operator");
VectorXc vector_from_json(const json& j, const std::string& context = "vector");
FrameSequence<cplx> frame_from_json(const json& j, const std::string& context = "frame");

/// Parses a file; syntax errors become ParseError with path:line:column.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
void write_json_file(const std::string& path, const json& j);

MatrixXc load_operator(const std::string& path);
VectorXc load_vector(const std::string& path);
FrameSequence<cplx> load_frame(const std::string& path);

json to_json(const Tolerances& tol);
json to_json(const FrameBounds& b);
json to_json(const KFrameReport<cplx>& r);
json to_json(const ControlledReport<cplx>& r);
json to_json(const AtomicReport& r);
json to_json(const RestrictedReport& r);
json to_json(const ConvergenceTrace& t);

}  // namespace kframe::io

#endif  // KFRAME_IO_HPP
