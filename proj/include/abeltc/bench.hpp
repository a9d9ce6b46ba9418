#pragma once

// Built-in benchmark equations with known solutions, and table reports of
// the approximation error on a grid.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "abeltc/error.hpp"
#include "abeltc/expr.hpp"
#include "abeltc/quadrature.hpp"
#include "abeltc/solver.hpp"

namespace abeltc::bench {

struct BenchmarkCase {
  std::string name;
  std::string description;
  Problem problem;                       // g is the manufactured forcing term
  std::optional<expr::Expr> closed_form_g;   // closed-form g for the exact solution, in x
  std::vector<int> default_n;
  std::vector<double> report_grid;
};

struct ReportRow {
  double x = 0.0;
  std::optional<double> exact;
  double approx = 0.0;
  std::optional<double> abs_error;
};

struct BenchReport {
  std::string case_name;
  int n = 0;
  std::vector<ReportRow> rows;
  std::optional<double> max_error;
  double timing_seconds = 0.0;
  std::size_t rank = 0;
  double condition_estimate = 1.0;
  double residual_norm = 0.0;
  std::vector<double> coefficients;
  std::vector<std::string> warnings;
};

enum class TableFormat { text, csv, json };

inline std::optional<TableFormat> parse_format(std::string_view s) {
  if (s == "text") return TableFormat::text;
  if (s == "csv") return TableFormat::csv;
  if (s == "json") return TableFormat::json;
  return std::nullopt;
}

inline std::vector<double> uniform_grid(double a, double b, int points) {
  if (points < 2) throw ValidationError("grid needs at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (points - 1);
  g.back() = b;
  return g;
}

inline std::vector<double> reference_report_grid() { return {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}; }

/// g obtained by applying the problem's integral operator to `exact`:
/// int_a^x Phi (phi(x) - phi(t))^-alpha dt for the first kind and
/// Phi(x) - lambda * (same) for the second.
inline Forcing manufactured_g(const Problem& without_g, const expr::Expr& exact,
                              int m = quad::manufactured_nodes) {
  const KernelMoments kernel(without_g);
  const EquationKind kind = without_g.kind;
  const double lambda = without_g.lambda;
  auto fn = [kernel, exact, kind, lambda, m](double x) {
    const double integral = kernel.apply(x, [&exact](double t) { return exact.evaluate("x", t); }, m);
    if (kind == EquationKind::first) return integral;
    return exact.evaluate("x", x) - lambda * integral;
  };
  return Forcing("manufactured[" + exact.to_string() + "]", std::move(fn));
}

namespace detail {

inline BenchmarkCase make_case(std::string name, std::string description, EquationKind kind, double alpha,
                               double lambda, std::string_view phi, std::string_view closed_form_g,
                               std::string_view exact, std::vector<int> ns) {
  BenchmarkCase c;
  c.name = std::move(name);
  c.description = std::move(description);
  c.problem.kind = kind;
  c.problem.alpha = alpha;
  c.problem.lambda = lambda;
  c.problem.a = 0.0;
  c.problem.b = 1.0;
  c.problem.z = 0.0;
  c.problem.phi = expr::parse(phi, "t");
  c.problem.exact = expr::parse(exact, "x");
  c.closed_form_g = expr::parse(closed_form_g, "x");
  c.problem.g = manufactured_g(c.problem, *c.problem.exact);
  c.default_n = std::move(ns);
  c.report_grid = reference_report_grid();
  return c;
}

}  // namespace detail

/// The five reference equations on [0, 1] with a = z = 0.
inline std::vector<BenchmarkCase> builtin_problems() {
  using detail::make_case;
  std::vector<BenchmarkCase> cases;
  cases.push_back(make_case("ex1", "first kind, kernel (x^2 - t^2)^(-1/2)", EquationKind::first, 0.5, -1.0, "t^2",
                            "2/3*pi*x^3", "pi*x^3", {5, 7, 9}));
  cases.push_back(make_case("ex2", "first kind, kernel (sin x - sin t)^(-1/4)", EquationKind::first, 0.25, -1.0,
                            "sin(t)", "4/3*sin(x)^(3/4)", "cos(x)", {5, 7, 9}));
  cases.push_back(make_case("ex3", "first kind, kernel (e^x - e^t)^(-1/6)", EquationKind::first, 1.0 / 6.0, -1.0,
                            "exp(t)", "6/5*(exp(x)-1)^(5/6)", "exp(x)", {5, 7, 9}));
  cases.push_back(make_case("ex4", "second kind, kernel (x - t)^(-1/2)", EquationKind::second, 0.5, -1.0, "t",
                            "x^2 + 16/15*x^(5/2)", "x^2", {5}));
  cases.push_back(make_case("ex5", "second kind, kernel (x - t)^(-1/4)", EquationKind::second, 0.25, -1.0, "t",
                            "1 - 2*x - 32/21*x^(7/4) + 4/3*x^(3/4)", "1-2*x", {3}));
  return cases;
}

inline const BenchmarkCase& find_case(const std::vector<BenchmarkCase>& cases, std::string_view name) {
  for (const auto& c : cases) {
    if (c.name == name) return c;
  }
  throw ValidationError("unknown example '" + std::string(name) + "'");
}

/// Tabulates a solution on a grid, comparing with the exact solution when
/// the problem carries one.
inline BenchReport make_report(std::string name, const Problem& p, const TaylorSolution& sol,
                               std::span<const double> grid, double seconds) {
  BenchReport r;
  r.case_name = std::move(name);
  r.n = sol.n;
  r.timing_seconds = seconds;
  r.rank = sol.rank;
  r.condition_estimate = sol.condition_estimate;
  r.residual_norm = sol.residual_norm;
  r.coefficients = sol.coefficients;
  r.warnings = sol.warnings;
  r.rows.reserve(grid.size());
  for (double x : grid) {
    ReportRow row;
    row.x = x;
    row.approx = evaluate_solution(sol, x);
    if (p.exact) {
      row.exact = p.exact->evaluate("x", x);
      row.abs_error = std::fabs(*row.exact - row.approx);
      r.max_error = std::max(r.max_error.value_or(0.0), *row.abs_error);
    }
    r.rows.push_back(row);
  }
  return r;
}

inline BenchReport run_benchmark(const BenchmarkCase& c, int n, std::span<const double> grid,
                                 const SolveOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const TaylorSolution sol = solve(c.problem, n, opts);
  BenchReport r = make_report(c.name, c.problem, sol, grid, 0.0);
  r.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline BenchReport run_benchmark(const BenchmarkCase& c, int n, const SolveOptions& opts = {}) {
  return run_benchmark(c, n, c.report_grid, opts);
}

/// Error-bound inputs from the known solution: e_i = |Phi^(i)(z) - c_i| and
/// the grid supremum of |Phi^(n+1)| over [a, b].
inline ErrorBoundInputs honest_bound_inputs(const Problem& p, const TaylorSolution& sol) {
  if (!p.exact) throw ValidationError("error bound inputs need an exact solution");
  ErrorBoundInputs in;
  expr::Expr d = *p.exact;
  for (int i = 0; i <= sol.n; ++i) {
    in.coeff_errors.push_back(std::fabs(d.evaluate("x", sol.z) - sol.coefficients[static_cast<std::size_t>(i)]));
    d = d.derivative("x");
  }
  for (double x : uniform_grid(p.a, p.b, error_bound_grid)) {
    in.deriv_bound = std::max(in.deriv_bound, std::fabs(d.evaluate("x", x)));
  }
  return in;
}

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string full(double v) { return fmt("%.17g", v); }

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace detail

inline nlohmann::json to_json(const BenchReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json j{{"x", row.x}, {"approx", row.approx}};
    if (row.exact) j["exact"] = *row.exact;
    if (row.abs_error) j["abs_error"] = *row.abs_error;
    rows.push_back(std::move(j));
  }
  nlohmann::json j{{"case", r.case_name},
                   {"n", r.n},
                   {"rows", std::move(rows)},
                   {"timing_seconds", r.timing_seconds},
                   {"coefficients", r.coefficients},
                   {"diagnostics",
                    {{"rank", r.rank},
                     {"condition_estimate", r.condition_estimate},
                     {"residual_norm", r.residual_norm},
                     {"warnings", r.warnings}}}};
  j["max_error"] = r.max_error ? nlohmann::json(*r.max_error) : nlohmann::json(nullptr);
  return j;
}

inline std::string render_csv(const BenchReport& r) {
  const bool has_exact = !r.rows.empty() && r.rows.front().exact.has_value();
  std::ostringstream out;
  out << (has_exact ? "x,exact,approx,abs_error\n" : "x,approx\n");
  for (const auto& row : r.rows) {
    out << detail::full(row.x);
    if (has_exact) out << ',' << detail::full(*row.exact);
    out << ',' << detail::full(row.approx);
    if (has_exact) out << ',' << detail::full(*row.abs_error);
    out << '\n';
  }
  return out.str();
}

/// Side-by-side table: x | exact | |Phi - Phi_n| for every report, all of
/// which must share the same grid. Without an exact solution the approximate
/// values are printed instead.
inline std::string render_text(std::span<const BenchReport> reports) {
  if (reports.empty()) return {};
  const auto& first = reports.front();
  for (const auto& r : reports) {
    if (r.rows.size() != first.rows.size()) throw ValidationError("reports must share one grid");
  }
  const bool has_exact = !first.rows.empty() && first.rows.front().exact.has_value();
  constexpr std::size_t w = 14;
  std::ostringstream out;
  out << detail::pad("x", 8);
  if (has_exact) out << " | " << detail::pad("exact", w);
  for (const auto& r : reports) {
    out << " | " << detail::pad((has_exact ? "e_" : "Phi_") + std::to_string(r.n), w);
  }
  out << '\n';
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    out << detail::pad(detail::fmt("%g", first.rows[i].x), 8);
    if (has_exact) out << " | " << detail::pad(detail::fmt("%.6g", *first.rows[i].exact), w);
    for (const auto& r : reports) {
      const auto& row = r.rows[i];
      out << " | " << detail::pad(detail::fmt("%.6g", has_exact ? *row.abs_error : row.approx), w);
    }
    out << '\n';
  }
  if (has_exact) {
    out << detail::pad("max", 8) << " | " << detail::pad("", w);
    for (const auto& r : reports) out << " | " << detail::pad(detail::fmt("%.6g", r.max_error.value_or(0.0)), w);
    out << '\n';
  }
  return out.str();
}

inline std::string render_table(const BenchReport& r, TableFormat format) {
  switch (format) {
    case TableFormat::text: return render_text(std::span<const BenchReport>(&r, 1));
    case TableFormat::csv: return render_csv(r);
    case TableFormat::json: return to_json(r).dump(2) + "\n";
  }
  return {};
}

}  // namespace abeltc::bench
