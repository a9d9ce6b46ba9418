#pragma once

// JSON problem configs. Field names are lower snake case; unknown keys are
// rejected. Expression fields use the grammar in expr.hpp.
//
//   {
//     "kind": "first" | "second",
//     "alpha": 0.5, "a": 0, "b": 1,
//     "z": 0,                     optional, defaults to a
//     "lambda": -1,               optional, second kind only, defaults to -1
//     "n": 5 | [5, 7, 9],
//     "phi": "t^2", "g": "2/3*pi*x^3",
//     "exact": "pi*x^3",          optional
//     "force_quadrature": false,  optional
//     "quad_nodes": 64,           optional
//     "grid_points": 101,         optional
//     "rank_tol": 1e-12           optional
//   }

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "abeltc/error.hpp"
#include "abeltc/expr.hpp"
#include "abeltc/linalg.hpp"
#include "abeltc/solver.hpp"

namespace abeltc::config {

inline constexpr int default_grid_points = 101;

struct Config {
  Problem problem;
  std::vector<int> n;
  int grid_points = default_grid_points;
  double rank_tol = linalg::default_rank_tol;
};

namespace detail {

using nlohmann::json;

inline double number_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ValidationError(std::string(key) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(std::string(key) + " must be finite");
  return d;
}

inline int integer_field(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ValidationError(key + " must be an integer");
  return v.get<int>();
}

inline std::string string_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ValidationError(std::string(key) + " must be a string");
  return v.get<std::string>();
}

inline expr::Expr expression_field(const json& j, const char* key, const char* var) {
  const std::string text = string_field(j, key);
  try {
    return expr::parse(text, var);
  } catch (const ParseError& e) {
    throw ValidationError(std::string(key) + ": " + e.what());
  }
}

inline void require(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError("missing required field '" + std::string(key) + "'");
}

// 1-based line and column of a byte offset.
inline std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Builds and validates a Config from JSON text. `origin` names the source
/// in error messages.
inline Config parse_config(const std::string& text, const std::string& origin = "<config>") {
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": JSON parse error at " + detail::location(text, e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(origin + ": config must be a JSON object");

  static const std::set<std::string> known = {"kind",  "alpha", "a",     "b",     "z",
                                              "lambda", "n",    "phi",   "g",     "exact",
                                              "force_quadrature", "quad_nodes", "grid_points", "rank_tol"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ValidationError(origin + ": unknown key '" + key + "'");
  }

  try {
    for (const char* key : {"kind", "alpha", "a", "b", "n", "phi", "g"}) detail::require(j, key);
    Config c;
    Problem& p = c.problem;

    const std::string kind = detail::string_field(j, "kind");
    if (kind == "first") {
      p.kind = EquationKind::first;
    } else if (kind == "second") {
      p.kind = EquationKind::second;
    } else {
      throw ValidationError("kind must be \"first\" or \"second\"");
    }
    p.alpha = detail::number_field(j, "alpha");
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw ValidationError("alpha must be in (0,1)");
    p.a = detail::number_field(j, "a");
    p.b = detail::number_field(j, "b");
    if (!(p.a < p.b)) throw ValidationError("a must be less than b");
    p.z = j.contains("z") ? detail::number_field(j, "z") : p.a;
    p.lambda = j.contains("lambda") ? detail::number_field(j, "lambda") : -1.0;

    const auto& n = j.at("n");
    if (n.is_array()) {
      if (n.empty()) throw ValidationError("n must not be empty");
      for (const auto& v : n) c.n.push_back(detail::integer_field(v, "n"));
    } else {
      c.n.push_back(detail::integer_field(n, "n"));
    }
    for (int v : c.n) {
      if (v < 1) throw ValidationError("n must be at least 1");
    }

    p.phi = detail::expression_field(j, "phi", "t");
    p.g = detail::expression_field(j, "g", "x");
    if (j.contains("exact")) p.exact = detail::expression_field(j, "exact", "x");

    if (j.contains("force_quadrature")) {
      if (!j["force_quadrature"].is_boolean()) throw ValidationError("force_quadrature must be a boolean");
      p.force_quadrature = j["force_quadrature"].get<bool>();
    }
    if (j.contains("quad_nodes")) p.quad_nodes = detail::integer_field(j["quad_nodes"], "quad_nodes");
    if (j.contains("grid_points")) {
      c.grid_points = detail::integer_field(j["grid_points"], "grid_points");
      if (c.grid_points < 2) throw ValidationError("grid_points must be at least 2");
    }
    if (j.contains("rank_tol")) {
      c.rank_tol = detail::number_field(j, "rank_tol");
      if (!(c.rank_tol > 0.0 && c.rank_tol < 1.0)) throw ValidationError("rank_tol must be in (0,1)");
    }

    validate(p);
    return c;
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "': file not found or unreadable");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

/// Inverse of parse_config. Expressions are written in canonical form.
inline nlohmann::json to_json(const Config& c) {
  const Problem& p = c.problem;
  if (!p.g.expression()) throw ValidationError("only expression-valued g can be serialized");
  nlohmann::json j;
  j["kind"] = p.kind == EquationKind::first ? "first" : "second";
  j["alpha"] = p.alpha;
  j["a"] = p.a;
  j["b"] = p.b;
  j["z"] = p.z;
  j["lambda"] = p.lambda;
  if (c.n.size() == 1) {
    j["n"] = c.n.front();
  } else {
    j["n"] = c.n;
  }
  j["phi"] = p.phi.to_string();
  j["g"] = p.g.expression()->to_string();
  if (p.exact) j["exact"] = p.exact->to_string();
  j["force_quadrature"] = p.force_quadrature;
  if (p.quad_nodes) j["quad_nodes"] = *p.quad_nodes;
  j["grid_points"] = c.grid_points;
  j["rank_tol"] = c.rank_tol;
  return j;
}

}  // namespace abeltc::config
