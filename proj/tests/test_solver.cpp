#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "abeltc/bench.hpp"
#include "abeltc/expr.hpp"
#include "abeltc/solver.hpp"

using namespace abeltc;

namespace {

const bench::BenchmarkCase& registry_case(const char* name) {
  static const auto cases = bench::builtin_problems();
  return bench::find_case(cases, name);
}

double max_grid_error(const Problem& p, const TaylorSolution& sol, int points = 101) {
  double worst = 0.0;
  for (double x : bench::uniform_grid(p.a, p.b, points)) {
    worst = std::max(worst, std::fabs(evaluate_solution(sol, x) - p.exact->evaluate("x", x)));
  }
  return worst;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

/// Matches a printed value to the digits it shows.
void expect_digits(double got, double printed, const char* what) {
  EXPECT_LE(std::fabs(got - printed), 5e-6 * std::fabs(printed) + 1e-15) << what << ": got " << got;
}

Problem second_kind(const char* phi, const char* g, double alpha, double lambda, double b = 1.0) {
  Problem p;
  p.kind = EquationKind::second;
  p.alpha = alpha;
  p.lambda = lambda;
  p.b = b;
  p.phi = expr::parse(phi, "t");
  p.g = expr::parse(g, "x");
  return p;
}

}  // namespace

TEST(CollocationPoints, Examples) {
  EXPECT_EQ(collocation_points(0, 1, 5), (std::vector<double>{0, 0.2, 0.4, 0.6, 0.8, 1}));
  EXPECT_EQ(collocation_points(0, 1, 1), (std::vector<double>{0, 1}));
  EXPECT_EQ(collocation_points(-1, 1, 4), (std::vector<double>{-1, -0.5, 0, 0.5, 1}));
  EXPECT_THROW(collocation_points(0, 1, 0), ValidationError);
}

TEST(Assemble, Example1ReferenceMatrixRow) {
  const auto& c = registry_case("ex1");
  const auto sys = assemble(c.problem, 5);
  const std::vector<double> printed{1.5708, 0.2, 0.015708, 0.000888889, 0.0000392699, 1.42222e-6};
  for (std::size_t j = 0; j < printed.size(); ++j) expect_digits(sys.matrix(1, j), printed[j], "A[1]");
  for (std::size_t j = 0; j < printed.size(); ++j) EXPECT_EQ(sys.matrix(0, j), 0.0);
}

TEST(Assemble, Example1ReferenceRightHandSide) {
  const std::vector<double> printed{0, 0.0167552, 0.134041, 0.452389, 1.07233, 2.0944};
  Problem p = registry_case("ex1").problem;
  const auto manufactured = assemble(p, 5);
  p.g = *registry_case("ex1").closed_form_g;
  const auto closed = assemble(p, 5);
  for (std::size_t i = 0; i < printed.size(); ++i) {
    expect_digits(manufactured.rhs[i], printed[i], "manufactured G");
    expect_digits(closed.rhs[i], printed[i], "closed-form G");
  }
}

TEST(Assemble, ZeroLambdaGivesTaylorBasisMatrix) {
  const Problem p = second_kind("t^2", "exp(x)", 0.5, 0.0);
  const auto sys = assemble(p, 4);
  for (std::size_t i = 0; i < 5; ++i) {
    double power = 1.0;
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(sys.matrix(i, j), power / factorial(static_cast<int>(j)));
      power *= sys.nodes[i];
    }
  }
}

TEST(Solve, ZeroLambdaInterpolatesG) {
  const Problem p = second_kind("t^2", "exp(x)", 0.5, 0.0);
  const auto sol = solve(p, 6);
  for (double x : collocation_points(0, 1, 6)) EXPECT_NEAR(evaluate_solution(sol, x), std::exp(x), 1e-13);
  const auto r = residual(p, sol, collocation_points(0, 1, 6));
  EXPECT_LE(max_abs(r), 1e-12);
}

TEST(Solve, Example4IsExactAtDegree5) {
  const auto& c = registry_case("ex4");
  const auto sol = solve(c.problem, 5);
  EXPECT_LE(max_grid_error(c.problem, sol), 1e-10);
  EXPECT_LE(max_abs(residual(c.problem, sol, bench::uniform_grid(0, 1, 101))), 1e-10);
}

TEST(Solve, Example5IsExactAtDegree3) {
  const auto& c = registry_case("ex5");
  EXPECT_LE(max_grid_error(c.problem, solve(c.problem, 3)), 1e-10);
}

TEST(Solve, Example1AtDegree9) {
  const auto& c = registry_case("ex1");
  EXPECT_LE(max_grid_error(c.problem, solve(c.problem, 9)), 1e-9);
}

TEST(Solve, Example1DegenerateRowReducesRank) {
  const auto sol = solve(registry_case("ex1").problem, 5);
  EXPECT_EQ(sol.rank, 5u);
  EXPECT_EQ(sol.coefficients.size(), 6u);
  EXPECT_TRUE(std::isfinite(sol.condition_estimate));
}

// The minimum-norm solve happens to land on the same particular solution
// as the reference degree-5 polynomial for Example 1.
TEST(Solve, Example1Degree5PolynomialCoefficients) {
  const auto sol = solve(registry_case("ex1").problem, 5);
  const std::vector<double> printed{0.000211964, -0.00380121, 0.0198716, 3.09737, 0.0441592, -0.0162574};
  for (std::size_t j = 0; j < printed.size(); ++j) {
    expect_digits(sol.coefficients[j] / factorial(static_cast<int>(j)), printed[j], "x^j coefficient");
  }
}

TEST(EvaluateSolution, Basics) {
  TaylorSolution s;
  s.n = 3;
  s.coefficients = {1, 0, 0, 0};
  EXPECT_EQ(evaluate_solution(s, 0.7), 1.0);
  s.coefficients = {0, 1, 0, 0};
  EXPECT_EQ(evaluate_solution(s, 0.5), 0.5);
  s.coefficients = {1, 2, 6, 12};  // 1 + 2x + 3x^2 + 2x^3
  EXPECT_DOUBLE_EQ(evaluate_solution(s, 2.0), 1 + 4 + 12 + 16);
}

TEST(EvaluateSolution, Example2AtPointFour) {
  const auto& c = registry_case("ex2");
  const auto sol = solve(c.problem, 9);
  EXPECT_NEAR(evaluate_solution(sol, 0.4), 0.921061, 5e-7);
  EXPECT_NEAR(evaluate_solution(sol, 0.4), std::cos(0.4), 5e-7);
}

TEST(Residual, Example1ImprovesWithDegree) {
  const auto& c = registry_case("ex1");
  const auto grid = bench::uniform_grid(0, 1, 101);
  const double r5 = max_abs(residual(c.problem, solve(c.problem, 5), grid));
  const double r9 = max_abs(residual(c.problem, solve(c.problem, 9), grid));
  EXPECT_GT(r5, r9);
}

TEST(Residual, RejectsPointsOutsideInterval) {
  const auto& c = registry_case("ex4");
  const std::vector<double> grid{1.5};
  EXPECT_THROW(residual(c.problem, solve(c.problem, 5), grid), ValidationError);
}

TEST(ErrorBound, Examples) {
  TaylorSolution s;
  s.n = 1;
  s.coefficients = {0, 0};
  EXPECT_EQ(error_bound(s, {0.0, {0.0, 0.0}}, 0, 1), 0.0);
  EXPECT_DOUBLE_EQ(error_bound(s, {1.0, {0.0, 0.0}}, 0, 1), 0.5);
  // C = 1 + 1 at x = 1, so a unit coefficient error contributes 2.
  EXPECT_DOUBLE_EQ(error_bound(s, {0.0, {0.0, 1.0}}, 0, 1), 2.0);
  EXPECT_THROW(error_bound(s, {0.0, {0.0}}, 0, 1), ValidationError);
  EXPECT_THROW(error_bound(s, {-1.0, {0.0, 0.0}}, 0, 1), ValidationError);
}

TEST(ErrorBound, DominatesMeasuredErrorOnBenchmarks) {
  for (const auto& c : bench::builtin_problems()) {
    for (int n : c.default_n) {
      const auto sol = solve(c.problem, n);
      const double bound = error_bound(sol, bench::honest_bound_inputs(c.problem, sol), c.problem.a, c.problem.b);
      EXPECT_GE(bound, max_grid_error(c.problem, sol)) << c.name << " n=" << n;
    }
  }
}

TEST(Validate, RejectsBadProblems) {
  Problem p = registry_case("ex1").problem;
  p.alpha = 1.5;
  EXPECT_THROW(validate(p), ValidationError);

  p = registry_case("ex1").problem;
  p.phi = expr::parse("t^3 - t");
  EXPECT_THROW(validate(p), ValidationError);

  p = registry_case("ex1").problem;
  p.b = p.a;
  EXPECT_THROW(validate(p), ValidationError);

  p = registry_case("ex1").problem;
  p.z = 2.0;
  EXPECT_THROW(validate(p), ValidationError);

  p = registry_case("ex1").problem;
  p.phi = expr::parse("x^2");
  EXPECT_THROW(validate(p), ValidationError);

  p = registry_case("ex1").problem;
  p.quad_nodes = 2;
  EXPECT_THROW(validate(p), ValidationError);
}

TEST(Validate, AllowsVanishingSlopeAtEndpoint) {
  EXPECT_NO_THROW(validate(registry_case("ex1").problem));
  Problem p = registry_case("ex1").problem;
  p.phi = expr::parse("(t - 0.5)^3");
  EXPECT_THROW(validate(p), ValidationError);
}

TEST(Solve, DegreeCap) {
  const auto& c = registry_case("ex4");
  EXPECT_THROW(solve(c.problem, 0), ValidationError);
  EXPECT_THROW(solve(c.problem, 31), ValidationError);
  SolveOptions opts;
  opts.max_degree = 32;
  const auto sol = solve(c.problem, 31, opts);
  EXPECT_FALSE(sol.warnings.empty());
}

// Property: second-kind problems with phi = t and a polynomial solution of
// degree d <= n are reproduced. g comes from the beta-function moments
// int_0^x t^k (x - t)^(-alpha) dt = x^(k+1-alpha) B(k+1, 1-alpha).
TEST(SolverProperty, PolynomialExactness) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(unit(rng) * 8);
    const int d = static_cast<int>(unit(rng) * (n + 1));
    const double alpha = 0.05 + 0.9 * unit(rng);
    const double lambda = -2.0 + 4.0 * unit(rng);
    const double b = 0.5 + 1.5 * unit(rng);
    std::vector<double> poly(static_cast<std::size_t>(d) + 1);
    for (auto& v : poly) v = -1.0 + 2.0 * unit(rng);

    Problem p;
    p.kind = EquationKind::second;
    p.alpha = alpha;
    p.lambda = lambda;
    p.b = b;
    p.phi = expr::parse("t");
    p.g = Forcing("beta-moments", [poly, alpha, lambda](double x) {
      double value = 0.0;
      double integral = 0.0;
      for (std::size_t k = 0; k < poly.size(); ++k) {
        value += poly[k] * std::pow(x, static_cast<double>(k));
        const double kd = static_cast<double>(k);
        integral += poly[k] * std::pow(x, kd + 1 - alpha) * std::beta(kd + 1.0, 1.0 - alpha);
      }
      return value - lambda * integral;
    });
    const auto sol = solve(p, n);
    double worst = 0.0;
    for (double x : bench::uniform_grid(0, b, 101)) {
      double want = 0.0;
      for (std::size_t k = 0; k < poly.size(); ++k) want += poly[k] * std::pow(x, static_cast<double>(k));
      worst = std::max(worst, std::fabs(evaluate_solution(sol, x) - want));
    }
    EXPECT_LE(worst, 1e-9) << "n=" << n << " d=" << d << " alpha=" << alpha << " lambda=" << lambda;
  }
}

// Property: for full-rank systems the equation holds at the nodes.
TEST(SolverProperty, CollocationAtNodes) {
  std::vector<Problem> problems;
  problems.push_back(registry_case("ex4").problem);
  problems.push_back(registry_case("ex5").problem);
  problems.push_back(second_kind("sin(t)", "exp(x) + x^2", 0.25, -1.0));
  problems.push_back(second_kind("exp(t)", "cos(3*x)", 0.6, 0.7, 1.5));
  problems.push_back(second_kind("t^2 + t", "1/(1+x)", 0.5, 2.0));
  for (const auto& p : problems) {
    for (int n : {3, 5, 8}) {
      const auto sol = solve(p, n);
      ASSERT_EQ(sol.rank, static_cast<std::size_t>(n) + 1);
      const auto nodes = collocation_points(p.a, p.b, n);
      std::vector<double> g;
      for (double x : nodes) g.push_back(p.g(x));
      EXPECT_LE(max_abs(residual(p, sol, nodes)), 1e-9 * (1.0 + max_abs(g))) << p.phi.to_string() << " n=" << n;
    }
  }
}

TEST(SolverProperty, ErrorDecreasesWithDegree) {
  for (const char* name : {"ex1", "ex2", "ex3"}) {
    const auto& c = registry_case(name);
    const double e5 = max_grid_error(c.problem, solve(c.problem, 5));
    const double e7 = max_grid_error(c.problem, solve(c.problem, 7));
    const double e9 = max_grid_error(c.problem, solve(c.problem, 9));
    EXPECT_LT(e7, e5) << name;
    EXPECT_LT(e9, e7) << name;
  }
}

TEST(SolverProperty, RepeatedSolvesAreBitIdentical) {
  for (const char* name : {"ex1", "ex2", "ex3", "ex4", "ex5"}) {
    const auto& c = registry_case(name);
    const auto ref = solve(c.problem, 7).coefficients;
    std::vector<std::vector<double>> got(4);
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < got.size(); ++i) {
      threads.emplace_back([&c, &got, i] { got[i] = solve(c.problem, 7).coefficients; });
    }
    for (auto& t : threads) t.join();
    for (const auto& g : got) EXPECT_EQ(g, ref) << name;
    EXPECT_EQ(solve(c.problem, 7).coefficients, ref) << name;
  }
}
