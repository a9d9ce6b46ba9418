#pragma once

// Command-line driver shared by tools/abeltc.cpp and the CLI tests.
//
//   abeltc solve --config PATH [--n N]... [--output text|csv|json] [--out PATH]
//   abeltc bench [--example NAME]... [--n 5,7,9] [--output FMT] [--out PATH]
//   abeltc quad  --alpha A --phi EXPR --x X --j J [--m M] [--a A] [--z Z]
//
// Exit codes: 0 success, 1 usage or validation error, 2 numeric failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "abeltc/bench.hpp"
#include "abeltc/config.hpp"
#include "abeltc/error.hpp"
#include "abeltc/expr.hpp"
#include "abeltc/quadrature.hpp"
#include "abeltc/solver.hpp"

namespace abeltc::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_numeric = 2;

inline constexpr const char* quad_nodes_env = "ABELTC_QUAD_NODES";

/// Node-count override from the environment, if set.
inline std::optional<int> env_quad_nodes() {
  const char* raw = std::getenv(quad_nodes_env);
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 4 || v > quad::max_rule_size) {
    throw ValidationError(std::string(quad_nodes_env) + " must be an integer in [4, " +
                          std::to_string(quad::max_rule_size) + "], got '" + raw + "'");
  }
  return static_cast<int>(v);
}

namespace detail {

inline std::string render_reports(const std::vector<bench::BenchReport>& reports, bench::TableFormat format,
                                  const std::string& title) {
  std::ostringstream out;
  switch (format) {
    case bench::TableFormat::text: {
      out << title << '\n';
      out << bench::render_text(reports);
      for (const auto& r : reports) {
        out << "n=" << r.n << " rank=" << r.rank << " condition_estimate=" << r.condition_estimate
            << " residual_norm=" << r.residual_norm << " time=" << r.timing_seconds << "s\n";
      }
      break;
    }
    case bench::TableFormat::csv:
      for (const auto& r : reports) {
        out << "# " << r.case_name << " n=" << r.n << '\n';
        out << bench::render_csv(r);
        if (r.max_error) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.17g", *r.max_error);
          out << "# max_error," << buf << '\n';
        }
        out << '\n';
      }
      break;
    case bench::TableFormat::json: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : reports) arr.push_back(bench::to_json(r));
      out << arr.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw ValidationError("cannot write output file '" + out_path + "'");
  f << text;
}

inline bench::TableFormat format_of(const std::string& s) {
  auto f = bench::parse_format(s);
  if (!f) throw ValidationError("unknown output format '" + s + "' (expected text, csv or json)");
  return *f;
}

inline void print_warnings(const std::vector<bench::BenchReport>& reports, std::ostream& err) {
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) err << "warning: " << r.case_name << " n=" << r.n << ": " << w << '\n';
  }
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Taylor-collocation solver for generalized Abel integral equations", "abeltc"};
  app.require_subcommand(1);

  auto* solve_cmd = app.add_subcommand("solve", "Solve one problem from a JSON config");
  std::string config_path;
  std::vector<int> solve_n;
  std::string solve_format = "text";
  std::string solve_out;
  double rank_tol = -1.0;
  int max_degree = default_max_degree;
  solve_cmd->add_option("--config", config_path, "Problem config (JSON)")->required();
  solve_cmd->add_option("--n", solve_n, "Taylor degree (repeatable; overrides the config)")->delimiter(',');
  solve_cmd->add_option("--output", solve_format, "text, csv or json");
  solve_cmd->add_option("--out", solve_out, "Write the report to this file");
  solve_cmd->add_option("--rank-tol", rank_tol, "Relative rank tolerance of the least-squares solve");
  solve_cmd->add_option("--max-degree", max_degree, "Largest accepted degree");

  auto* bench_cmd = app.add_subcommand("bench", "Run the built-in benchmark equations");
  std::vector<std::string> examples;
  std::vector<int> bench_n;
  std::string bench_format = "text";
  std::string bench_out;
  int bench_grid = 0;
  bench_cmd->add_option("--example", examples, "ex1..ex5 (repeatable; default all)")->delimiter(',');
  bench_cmd->add_option("--n", bench_n, "Comma-separated degrees (default per example)")->delimiter(',');
  bench_cmd->add_option("--output", bench_format, "text, csv or json");
  bench_cmd->add_option("--out", bench_out, "Write the report to this file");
  bench_cmd->add_option("--grid-points", bench_grid, "Uniform report grid size (default 0, 0.2, ..., 1)");

  auto* quad_cmd = app.add_subcommand("quad", "Print one singular moment integral");
  double q_alpha = 0.0;
  std::string q_phi;
  double q_x = 0.0;
  int q_j = 0;
  int q_m = 0;
  double q_a = 0.0;
  double q_z = 0.0;
  bool q_force = false;
  quad_cmd->add_option("--alpha", q_alpha, "Singularity exponent in (0,1)")->required();
  quad_cmd->add_option("--phi", q_phi, "phi(t) expression")->required();
  quad_cmd->add_option("--x", q_x, "Upper limit")->required();
  quad_cmd->add_option("--j", q_j, "Moment power")->required();
  quad_cmd->add_option("--m", q_m, "Quadrature nodes (default 64)");
  quad_cmd->add_option("--a", q_a, "Lower limit (default 0)");
  quad_cmd->add_option("--z", q_z, "Expansion point (default 0)");
  quad_cmd->add_flag("--force-quadrature", q_force, "Use quadrature even for phi = t");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_validation;
  }

  try {
    const auto env_nodes = env_quad_nodes();

    if (*solve_cmd) {
      const auto format = detail::format_of(solve_format);
      config::Config cfg = config::load_config(config_path);
      if (!cfg.problem.quad_nodes && env_nodes) cfg.problem.quad_nodes = env_nodes;
      SolveOptions opts;
      opts.rank_tol = rank_tol > 0.0 ? rank_tol : cfg.rank_tol;
      opts.max_degree = max_degree;
      const std::vector<int> ns = solve_n.empty() ? cfg.n : solve_n;
      const auto grid = bench::uniform_grid(cfg.problem.a, cfg.problem.b, cfg.grid_points);
      std::vector<bench::BenchReport> reports;
      for (int n : ns) {
        const auto start = std::chrono::steady_clock::now();
        const TaylorSolution sol = solve(cfg.problem, n, opts);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        reports.push_back(bench::make_report(config_path, cfg.problem, sol, grid, secs));
      }
      detail::print_warnings(reports, err);
      detail::emit(detail::render_reports(reports, format, config_path), solve_out, out);
      return exit_ok;
    }

    if (*bench_cmd) {
      const auto format = detail::format_of(bench_format);
      auto cases = bench::builtin_problems();
      if (examples.empty()) {
        for (const auto& c : cases) examples.push_back(c.name);
      }
      std::string text;
      nlohmann::json all = nlohmann::json::array();
      for (const auto& name : examples) {
        bench::BenchmarkCase c = bench::find_case(cases, name);
        if (env_nodes) c.problem.quad_nodes = env_nodes;
        if (bench_grid) c.report_grid = bench::uniform_grid(c.problem.a, c.problem.b, bench_grid);
        const std::vector<int> ns = bench_n.empty() ? c.default_n : bench_n;
        std::vector<bench::BenchReport> reports;
        for (int n : ns) reports.push_back(bench::run_benchmark(c, n));
        detail::print_warnings(reports, err);
        if (format == bench::TableFormat::json) {
          for (const auto& r : reports) all.push_back(bench::to_json(r));
        } else {
          text += detail::render_reports(reports, format, c.name + ": " + c.description);
          if (format == bench::TableFormat::text) text += '\n';
        }
      }
      if (format == bench::TableFormat::json) text = all.dump(2) + "\n";
      detail::emit(text, bench_out, out);
      return exit_ok;
    }

    if (*quad_cmd) {
      const expr::Expr phi = expr::parse(q_phi, "t");
      if (!(q_alpha > 0.0 && q_alpha < 1.0)) throw ValidationError("alpha must be in (0,1)");
      if (q_j < 0) throw ValidationError("j must be non-negative");
      const int m = q_m > 0 ? q_m : env_nodes.value_or(64);
      double value = 0.0;
      if (phi.is_variable("t") && !q_force) {
        value = quad::singular_integral_identity_phi(q_x, q_j, q_z, q_a, q_alpha);
      } else {
        const expr::Expr dphi = phi.derivative("t");
        quad::SingularIntegralSpec spec;
        spec.x = q_x;
        spec.j = q_j;
        spec.z = q_z;
        spec.a = q_a;
        spec.alpha = q_alpha;
        spec.phi = [phi](double t) { return phi.evaluate("t", t); };
        spec.phi_prime = [dphi](double t) { return dphi.evaluate("t", t); };
        value = quad::singular_integral(spec, m);
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", value);
      out << buf << '\n';
      return exit_ok;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  }
  return exit_validation;
}

}  // namespace abeltc::cli
