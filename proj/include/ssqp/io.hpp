#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "ssqp/driver.hpp"

namespace ssqp {

/// Thrown for malformed or schema-violating JSON input.
class ParseError : public Error
{
public:
  using Error::Error;
};

namespace io {

using json = nlohmann::json;

inline json encode_scalar(double v)
{
  if (std::isinf(v)) { return v > 0 ? json("inf") : json("-inf"); }
  if (std::isnan(v)) { throw ParseError("cannot encode NaN"); }
  return json(v);
}

inline double decode_scalar(const json & j, const std::string & where)
{
  if (j.is_number()) { return j.get<double>(); }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") { return kInf; }
    if (s == "-inf") { return -kInf; }
  }
  throw ParseError(where + ": expected a number or \"inf\"/\"-inf\"");
}

inline json encode_vector(const Vector & v)
{
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) { a.push_back(encode_scalar(v(i))); }
  return a;
}

inline Vector decode_vector(const json & j, const std::string & where)
{
  if (!j.is_array()) { throw ParseError(where + ": expected an array"); }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = decode_scalar(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline json encode_matrix(const Matrix & m)
{
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) { a.push_back(encode_vector(m.row(r).transpose())); }
  return a;
}

/// Row-major array of arrays; `cols` fixes the width of an empty matrix.
inline Matrix decode_matrix(const json & j, const std::string & where, Eigen::Index cols = -1)
{
  if (!j.is_array()) { throw ParseError(where + ": expected an array of rows"); }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) { return Matrix(0, cols < 0 ? 0 : cols); }
  const Vector first = decode_vector(j[0], where + "[0]");
  Matrix m(rows, first.size());
  m.row(0) = first.transpose();
  for (Eigen::Index r = 1; r < rows; ++r) {
    const Vector row = decode_vector(j[static_cast<std::size_t>(r)], where + "[" + std::to_string(r) + "]");
    if (row.size() != m.cols()) { throw ParseError(where + ": ragged rows"); }
    m.row(r) = row.transpose();
  }
  return m;
}

inline json problem_to_json(const ProblemSpec & p)
{
  json j;
  j["A"] = encode_matrix(p.A);
  j["b"] = encode_vector(p.b);
  j["q"] = p.q;
  json h;
  std::visit(
    [&](const auto & hh) {
      using H = std::decay_t<decltype(hh)>;
      if constexpr (std::is_same_v<H, ZeroH>) {
        h["kind"] = "zero";
      } else if constexpr (std::is_same_v<H, LinearH>) {
        h["kind"] = "linear";
        h["c"] = encode_vector(hh.c);
      } else {
        h["kind"] = "quadratic";
        h["P"] = encode_matrix(hh.P);
        h["c"] = encode_vector(hh.c);
        h["lipschitz"] = hh.lipschitz;
      }
    },
    p.h);
  j["h"] = h;
  json X;
  X["lower"] = encode_vector(p.X.lower);
  X["upper"] = encode_vector(p.X.upper);
  X["G"] = encode_matrix(p.X.G);
  X["g"] = encode_vector(p.X.g);
  j["X"] = X;
  if (p.x0) { j["x0"] = encode_vector(*p.x0); }
  return j;
}

inline const json & require_key(const json & j, const char * key, const std::string & where)
{
  if (!j.is_object() || !j.contains(key)) { throw ParseError(where + ": missing key \"" + key + "\""); }
  return j.at(key);
}

inline ProblemSpec problem_from_json(const json & j)
{
  if (!j.is_object()) { throw ParseError("problem: expected a JSON object"); }
  ProblemSpec p;
  const Vector b = decode_vector(require_key(j, "b", "problem"), "b");
  p.b = b;
  const json & jA = require_key(j, "A", "problem");
  p.A = decode_matrix(jA, "A");
  if (p.A.rows() == 0) { throw ParseError("A: at least one row is required"); }
  p.q = decode_scalar(require_key(j, "q", "problem"), "q");
  const Eigen::Index n = p.A.cols();

  const json & jh = require_key(j, "h", "problem");
  const json & kind = require_key(jh, "kind", "h");
  if (!kind.is_string()) { throw ParseError("h.kind: expected a string"); }
  const auto k = kind.get<std::string>();
  if (k == "zero") {
    p.h = ZeroH{};
  } else if (k == "linear") {
    p.h = LinearH{decode_vector(require_key(jh, "c", "h"), "h.c")};
  } else if (k == "quadratic") {
    Matrix P = decode_matrix(require_key(jh, "P", "h"), "h.P", n);
    Vector c = jh.contains("c") ? decode_vector(jh.at("c"), "h.c") : Vector::Zero(P.rows());
    if (jh.contains("lipschitz")) {
      p.h = QuadraticH{std::move(P), std::move(c), decode_scalar(jh.at("lipschitz"), "h.lipschitz")};
    } else {
      p.h = make_quadratic_h(std::move(P), std::move(c));
    }
  } else {
    throw ParseError("h.kind: unknown kind \"" + k + "\"");
  }

  if (j.contains("X")) {
    const json & jX = j.at("X");
    Vector lo = jX.contains("lower") ? decode_vector(jX.at("lower"), "X.lower") : Vector::Constant(n, -kInf);
    Vector up = jX.contains("upper") ? decode_vector(jX.at("upper"), "X.upper") : Vector::Constant(n, kInf);
    Matrix G = jX.contains("G") ? decode_matrix(jX.at("G"), "X.G", n) : Matrix(0, n);
    Vector g = jX.contains("g") ? decode_vector(jX.at("g"), "X.g") : Vector(0);
    p.X = Polyhedron(std::move(lo), std::move(up), std::move(G), std::move(g));
  } else {
    p.X = Polyhedron::free(n);
  }
  if (j.contains("x0")) { p.x0 = decode_vector(j.at("x0"), "x0"); }
  p.validate();
  if (p.x0) { detail::require_same(p.x0->size(), n, "x0"); }
  return p;
}

/// Parses JSON text; syntax errors report line and column.
inline json parse_json_text(const std::string & text, const std::string & source)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error & e) {
    long line = 1;
    long col = 0;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 0;
      } else {
        ++col;
      }
    }
    throw ParseError(
      source + ": malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col + 1) + ": "
      + e.what());
  }
}

inline std::string read_text_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw ParseError("cannot open '" + path + "'"); }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ProblemSpec read_problem(const std::string & path)
{
  return problem_from_json(parse_json_text(read_text_file(path), path));
}

inline void write_text_file(const std::string & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) { throw ParseError("cannot write '" + path + "'"); }
  out << text;
}

inline std::string dump(const json & j) { return j.dump(2) + "\n"; }

inline void write_problem(const std::string & path, const ProblemSpec & p) { write_text_file(path, dump(problem_to_json(p))); }

inline json index_list(const std::vector<Eigen::Index> & v)
{
  json a = json::array();
  for (const auto i : v) { a.push_back(i); }
  return a;
}

inline json kkt_to_json(const KktReport & r)
{
  json j;
  j["epsilon"] = r.epsilon;
  j["I"] = index_list(r.sets.I);
  j["J"] = index_list(r.sets.J);
  j["K"] = index_list(r.sets.K);
  j["multipliers"] = encode_vector(r.multipliers);
  j["complementarity_max"] = r.complementarity_max;
  j["projected_residual"] = r.projected_residual;
  j["pass"] = r.pass;
  return j;
}

inline json clarke_to_json(const ClarkeReport & r)
{
  json j;
  j["residual"] = r.residual;
  j["mu"] = r.mu;
  j["epsilon"] = r.epsilon;
  j["pass"] = r.pass;
  return j;
}

/// Solve report: x_final, mu_final, qp_solves, bound, the KKT fields, and the Clarke check for q = 1.
inline json report_to_json(const SolveResult & r)
{
  json j = kkt_to_json(r.kkt);
  j["x_final"] = encode_vector(r.x_final);
  j["mu_final"] = r.mu_final;
  j["qp_solves"] = r.qp_solves;
  j["bound"] = r.bound;
  j["outer_iterations"] = r.outer_iterations;
  j["final_residual"] = r.final_residual;
  if (r.clarke) { j["clarke"] = clarke_to_json(*r.clarke); }
  return j;
}

inline constexpr const char * kTraceHeader = "qp_solve,outer_i,mu,F_tilde,decrease,residual_norm,r_k,L_hk";

inline void write_trace_csv(std::ostream & os, const std::vector<TraceRow> & trace)
{
  os << kTraceHeader << '\n';
  os << std::setprecision(17);
  for (const auto & t : trace) {
    os << t.qp_solve << ',' << t.outer_i << ',' << t.mu << ',' << t.F_tilde << ',' << t.decrease << ','
       << t.residual_norm << ',' << t.r_k << ',' << t.L_hk << '\n';
  }
}

}  // namespace io
}  // namespace ssqp
