#pragma once

// Taylor-collocation for generalized Abel equations
//
//   first kind:   int_a^x Phi(t) (phi(x) - phi(t))^(-alpha) dt = g(x)
//   second kind:  Phi(x) - lambda int_a^x Phi(t) (phi(x) - phi(t))^(-alpha) dt = g(x)
//
// with the ansatz Phi_n(x) = sum_j c_j / j! (x - z)^j, collocated at n + 1
// equispaced nodes of [a, b].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "abeltc/error.hpp"
#include "abeltc/expr.hpp"
#include "abeltc/linalg.hpp"
#include "abeltc/quadrature.hpp"

namespace abeltc {

enum class EquationKind { first, second };

inline constexpr int default_max_degree = 30;
inline constexpr int monotonicity_samples = 257;
inline constexpr int error_bound_grid = 1001;
inline constexpr double ill_conditioned_threshold = 1e12;

/// Right-hand side g(x): either a parsed expression in x or an opaque
/// callable (used for manufactured forcing terms).
class Forcing {
 public:
  Forcing() : Forcing(expr::Expr()) {}
  Forcing(expr::Expr e)  // NOLINT(google-explicit-constructor)
      : expr_(std::move(e)), label_(expr_->to_string()) {
    fn_ = [ex = *expr_](double x) { return ex.evaluate("x", x); };
  }
  Forcing(std::string label, std::function<double(double)> fn) : fn_(std::move(fn)), label_(std::move(label)) {}

  double operator()(double x) const { return fn_(x); }
  const std::optional<expr::Expr>& expression() const { return expr_; }
  const std::string& label() const { return label_; }

 private:
  std::optional<expr::Expr> expr_;
  std::function<double(double)> fn_;
  std::string label_;
};

struct Problem {
  EquationKind kind = EquationKind::first;
  double alpha = 0.5;
  double a = 0.0;
  double b = 1.0;
  double z = 0.0;
  double lambda = -1.0;  // ignored for the first kind
  expr::Expr phi;        // in t
  Forcing g;             // in x
  std::optional<expr::Expr> exact;  // in x
  bool force_quadrature = false;
  std::optional<int> quad_nodes;
};

struct SolveOptions {
  double rank_tol = linalg::default_rank_tol;
  int max_degree = default_max_degree;
};

struct TaylorSolution {
  double z = 0.0;
  int n = 0;
  std::vector<double> coefficients;  // c_j = Phi^(j)(z), j = 0..n
  std::size_t rank = 0;
  double residual_norm = 0.0;
  double condition_estimate = 1.0;
  std::vector<std::string> warnings;
};

struct LinearSystem {
  std::vector<double> nodes;
  linalg::DenseMatrix matrix;
  std::vector<double> rhs;
};

struct ErrorBoundInputs {
  double deriv_bound = 0.0;          // sup |Phi^(n+1)| on [a, b]
  std::vector<double> coeff_errors;  // |Phi^(i)(z) - c_i|, i = 0..n
};

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// Weakly singular moments I(x, j) for a problem's kernel, dispatching to
/// the closed form when phi is the bare variable t.
class KernelMoments {
 public:
  explicit KernelMoments(const Problem& p)
      : alpha_(p.alpha),
        a_(p.a),
        z_(p.z),
        phi_(p.phi),
        phi_prime_(p.phi.derivative("t")),
        closed_form_(p.phi.is_variable("t") && !p.force_quadrature) {}

  bool closed_form() const { return closed_form_; }

  double phi(double t) const { return phi_.evaluate("t", t); }
  double phi_prime(double t) const { return phi_prime_.evaluate("t", t); }

  std::vector<double> moments(double x, int max_j, int m) const {
    if (closed_form_) return quad::identity_phi_moments(x, max_j, z_, a_, alpha_);
    return quad::singular_moments(
        x, max_j, z_, a_, alpha_, [this](double t) { return phi(t); }, [this](double t) { return phi_prime(t); }, m);
  }

  /// int_a^x f(t) (phi(x) - phi(t))^(-alpha) dt.
  template <class F>
  double apply(double x, const F& f, int m) const {
    return quad::singular_weighted_integral(
        x, a_, alpha_, f, [this](double t) { return phi(t); }, [this](double t) { return phi_prime(t); }, m);
  }

 private:
  double alpha_;
  double a_;
  double z_;
  expr::Expr phi_;
  expr::Expr phi_prime_;
  bool closed_form_;
};

/// Checks the parameter ranges and samples phi' for strict monotonicity.
/// Interior samples must be positive; the endpoints may vanish.
inline void validate(const Problem& p) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw ValidationError("alpha must be in (0,1)");
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !(p.a < p.b)) throw ValidationError("a must be less than b");
  if (!(p.z >= p.a && p.z <= p.b)) throw ValidationError("z must lie in [a,b]");
  if (p.kind == EquationKind::second && !std::isfinite(p.lambda)) throw ValidationError("lambda must be finite");
  if (p.quad_nodes && (*p.quad_nodes < 4 || *p.quad_nodes > quad::max_rule_size)) {
    throw ValidationError("quad_nodes must be in [4, " + std::to_string(quad::max_rule_size) + "]");
  }
  for (const auto& v : p.phi.variables()) {
    if (v != "t") throw ValidationError("phi may only depend on t, found '" + v + "'");
  }
  if (p.g.expression()) {
    for (const auto& v : p.g.expression()->variables()) {
      if (v != "x") throw ValidationError("g may only depend on x, found '" + v + "'");
    }
  }
  if (p.exact) {
    for (const auto& v : p.exact->variables()) {
      if (v != "x") throw ValidationError("exact may only depend on x, found '" + v + "'");
    }
  }

  const expr::Expr dphi = p.phi.derivative("t");
  const int last = monotonicity_samples - 1;
  for (int i = 0; i <= last; ++i) {
    const double t = i == last ? p.b : p.a + (p.b - p.a) * i / last;
    const bool endpoint = i == 0 || i == last;
    double slope = 0.0;
    try {
      slope = dphi.evaluate("t", t);
    } catch (const EvalError& e) {
      if (endpoint) continue;
      throw ValidationError("phi' cannot be evaluated at t=" + std::to_string(t) + ": " + e.what());
    }
    if (endpoint ? slope < 0.0 : !(slope > 0.0)) {
      std::ostringstream msg;
      msg << "phi must be strictly increasing on [a,b]: phi'(" << t << ") = " << slope;
      throw ValidationError(msg.str());
    }
  }
}

/// x_i = a + i (b - a) / n, i = 0..n.
inline std::vector<double> collocation_points(double a, double b, int n) {
  if (n < 1) throw ValidationError("degree n must be at least 1");
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
  x.front() = a;
  x.back() = b;
  return x;
}

namespace detail {

inline void check_degree(int n, const SolveOptions& opts, std::vector<std::string>* warnings) {
  if (n < 1) throw ValidationError("degree n must be at least 1");
  if (n > opts.max_degree) {
    throw ValidationError("degree n=" + std::to_string(n) + " exceeds the cap " + std::to_string(opts.max_degree));
  }
  if (n > default_max_degree && warnings) {
    warnings->push_back("degree n=" + std::to_string(n) + " is above " + std::to_string(default_max_degree) +
                        "; monomial conditioning degrades in double precision");
  }
}

inline int assembly_nodes(const Problem& p, int n) { return p.quad_nodes.value_or(quad::default_assembly_nodes(n)); }

}  // namespace detail

/// Collocation matrix and right-hand side: A for the first kind, B - lambda A
/// for the second, with A_ij = I(x_i, j) / j! and B_ij = (x_i - z)^j / j!.
inline LinearSystem assemble(const Problem& p, int n, const SolveOptions& opts = {}) {
  detail::check_degree(n, opts, nullptr);
  validate(p);
  const KernelMoments kernel(p);
  const int m = detail::assembly_nodes(p, n);

  LinearSystem sys;
  sys.nodes = collocation_points(p.a, p.b, n);
  const auto size = sys.nodes.size();
  sys.matrix = linalg::DenseMatrix(size, size);
  sys.rhs.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double x = sys.nodes[i];
    const auto mom = kernel.moments(x, n, m);
    double power = 1.0;
    for (std::size_t j = 0; j < size; ++j) {
      const double fj = factorial(static_cast<int>(j));
      const double a_ij = mom[j] / fj;
      if (p.kind == EquationKind::first) {
        sys.matrix(i, j) = a_ij;
      } else {
        sys.matrix(i, j) = power / fj - p.lambda * a_ij;
      }
      power *= x - p.z;
    }
    sys.rhs[i] = p.g(x);
    if (!std::isfinite(sys.rhs[i])) throw NumericError("g(" + std::to_string(x) + ") is not finite");
  }
  return sys;
}

inline TaylorSolution solve(const Problem& p, int n, const SolveOptions& opts = {}) {
  TaylorSolution sol;
  detail::check_degree(n, opts, &sol.warnings);
  const LinearSystem sys = assemble(p, n, opts);
  const linalg::LsSolution ls = linalg::solve_min_norm_ls(sys.matrix, sys.rhs, opts.rank_tol);
  sol.z = p.z;
  sol.n = n;
  sol.coefficients = ls.x;
  sol.rank = ls.rank;
  sol.residual_norm = ls.residual_norm;
  sol.condition_estimate = ls.condition_estimate;
  for (double c : sol.coefficients) {
    if (!std::isfinite(c)) throw NumericError("solve produced a non-finite coefficient");
  }
  if (sol.condition_estimate > ill_conditioned_threshold) {
    std::ostringstream msg;
    msg << "collocation system is ill-conditioned (estimate " << sol.condition_estimate << ")";
    sol.warnings.push_back(msg.str());
  }
  return sol;
}

/// Phi_n(x) = sum_j c_j / j! (x - z)^j by nested Horner evaluation.
inline double evaluate_solution(const TaylorSolution& sol, double x) {
  const double h = x - sol.z;
  const auto& c = sol.coefficients;
  if (c.empty()) return 0.0;
  double acc = c.back();
  for (std::size_t j = c.size() - 1; j > 0; --j) acc = c[j - 1] + acc * h / static_cast<double>(j);
  return acc;
}

/// Signed equation defect LHS - RHS at each grid point.
inline std::vector<double> residual(const Problem& p, const TaylorSolution& sol, std::span<const double> grid) {
  const KernelMoments kernel(p);
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) {
    if (x < p.a || x > p.b) throw ValidationError("residual grid point outside [a,b]");
    const auto mom = kernel.moments(x, sol.n, quad::residual_nodes);
    double integral = 0.0;
    for (std::size_t j = 0; j < sol.coefficients.size(); ++j) {
      integral += sol.coefficients[j] / factorial(static_cast<int>(j)) * mom[j];
    }
    const double lhs = p.kind == EquationKind::first ? integral : evaluate_solution(sol, x) - p.lambda * integral;
    out.push_back(lhs - p.g(x));
  }
  return out;
}

/// A-posteriori bound  M / (n+1)! * deriv_bound + C * max_i e_i  with
/// M = max |x - z|^(n+1) and C = max sum_i |x - z|^i / i!, both over a
/// 1001-point grid of [a, b].
inline double error_bound(const TaylorSolution& sol, const ErrorBoundInputs& in, double a, double b) {
  if (!(in.deriv_bound >= 0.0)) throw ValidationError("deriv_bound must be non-negative");
  if (in.coeff_errors.size() != sol.coefficients.size()) {
    throw ValidationError("coeff_errors must have n+1 entries");
  }
  double max_e = 0.0;
  for (double e : in.coeff_errors) {
    if (!(e >= 0.0)) throw ValidationError("coefficient errors must be non-negative");
    max_e = std::max(max_e, e);
  }
  const int n = sol.n;
  double big_m = 0.0;
  double big_c = 0.0;
  const int last = error_bound_grid - 1;
  for (int k = 0; k <= last; ++k) {
    const double x = k == last ? b : a + (b - a) * k / last;
    const double d = std::fabs(x - sol.z);
    double term = 1.0;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      sum += term;
      term *= d / (i + 1);
    }
    big_c = std::max(big_c, sum);
    big_m = std::max(big_m, std::pow(d, n + 1));
  }
  return big_m / factorial(n + 1) * in.deriv_bound + big_c * max_e;
}

}  // namespace abeltc
