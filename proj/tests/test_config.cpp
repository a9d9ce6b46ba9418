#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "abeltc/config.hpp"

using namespace abeltc;
using namespace abeltc::config;

namespace {

const char* minimal = R"json({
  "kind": "first",
  "alpha": 0.5,
  "a": 0,
  "b": 1,
  "n": 5,
  "phi": "t^2",
  "g": "2/3*pi*x^3"
})json";

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

std::string with(const std::string& key, const std::string& value) {
  auto j = nlohmann::json::parse(minimal);
  j[key] = nlohmann::json::parse(value);
  return j.dump();
}

void expect_same_problem(const Config& x, const Config& y) {
  const Problem& p = x.problem;
  const Problem& q = y.problem;
  EXPECT_EQ(p.kind, q.kind);
  EXPECT_EQ(p.alpha, q.alpha);
  EXPECT_EQ(p.a, q.a);
  EXPECT_EQ(p.b, q.b);
  EXPECT_EQ(p.z, q.z);
  EXPECT_EQ(p.lambda, q.lambda);
  EXPECT_EQ(p.phi, q.phi);
  EXPECT_EQ(*p.g.expression(), *q.g.expression());
  EXPECT_EQ(p.exact.has_value(), q.exact.has_value());
  if (p.exact && q.exact) {
    EXPECT_EQ(*p.exact, *q.exact);
  }
  EXPECT_EQ(p.force_quadrature, q.force_quadrature);
  EXPECT_EQ(p.quad_nodes, q.quad_nodes);
  EXPECT_EQ(x.n, y.n);
  EXPECT_EQ(x.grid_points, y.grid_points);
  EXPECT_EQ(x.rank_tol, y.rank_tol);
}

}  // namespace

TEST(Config, MinimalUsesDefaults) {
  const Config c = parse_config(minimal);
  EXPECT_EQ(c.problem.kind, EquationKind::first);
  EXPECT_EQ(c.problem.z, c.problem.a);
  EXPECT_EQ(c.problem.lambda, -1.0);
  EXPECT_EQ(c.grid_points, 101);
  EXPECT_EQ(c.n, std::vector<int>{5});
  EXPECT_FALSE(c.problem.exact);
  EXPECT_FALSE(c.problem.quad_nodes);
}

TEST(Config, DegreeList) {
  EXPECT_EQ(parse_config(with("n", "[5, 7, 9]")).n, (std::vector<int>{5, 7, 9}));
  EXPECT_NE(error_of(with("n", "[]")).find("n must not be empty"), std::string::npos);
  EXPECT_NE(error_of(with("n", "2.5")).find("integer"), std::string::npos);
}

TEST(Config, AlphaOutOfRange) {
  const std::string msg = error_of(with("alpha", "1.5"));
  EXPECT_NE(msg.find("alpha must be in (0,1)"), std::string::npos) << msg;
  EXPECT_NE(msg.find("cfg.json"), std::string::npos) << msg;
}

TEST(Config, NonMonotonePhi) {
  const std::string msg = error_of(with("phi", "\"t^3 - t\""));
  EXPECT_NE(msg.find("strictly increasing"), std::string::npos) << msg;
}

TEST(Config, UnknownKeyIsRejected) {
  const std::string msg = error_of(with("alhpa", "0.5"));
  EXPECT_NE(msg.find("unknown key 'alhpa'"), std::string::npos) << msg;
}

TEST(Config, MissingRequiredField) {
  auto j = nlohmann::json::parse(minimal);
  j.erase("g");
  EXPECT_NE(error_of(j.dump()).find("'g'"), std::string::npos);
}

TEST(Config, ExpressionErrorsNameTheField) {
  const std::string msg = error_of(with("g", "\"x + t\""));
  EXPECT_NE(msg.find("g:"), std::string::npos) << msg;
  EXPECT_NE(error_of(with("kind", "\"third\"")).find("kind"), std::string::npos);
}

TEST(Config, JsonSyntaxErrorHasLocation) {
  const std::string msg = error_of("{\n  \"kind\": \"first\",\n  \"alpha\": ,\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(Config, MissingFile) {
  try {
    load_config("/nonexistent/abeltc/missing.json");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("not found"), std::string::npos);
  }
}

TEST(Config, LoadsFromDisk) {
  const auto path = std::filesystem::temp_directory_path() / "abeltc_config_test.json";
  {
    std::ofstream f(path);
    f << with("exact", "\"pi*x^3\"");
  }
  const Config c = load_config(path.string());
  EXPECT_EQ(*c.problem.exact, expr::parse("pi*x^3"));
  std::filesystem::remove(path);
}

TEST(Config, RoundTrip) {
  const Config c = parse_config(R"json({"kind": "second", "alpha": 0.25, "a": -0.5, "b": 2, "z": 0.1,
    "lambda": 0.3, "n": [3, 4], "phi": "t + sin(t)/4", "g": "1 - 2*x", "exact": "exp(-x^2)",
    "force_quadrature": true, "quad_nodes": 40, "grid_points": 11, "rank_tol": 1e-10})json");
  expect_same_problem(c, parse_config(to_json(c).dump()));
  const Config m = parse_config(minimal);
  expect_same_problem(m, parse_config(to_json(m).dump()));
}

// Property: random valid configs survive serialization unchanged.
TEST(ConfigProperty, RandomRoundTrip) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const char* phis[] = {"t", "t^2", "exp(t)", "sin(t)", "t + t^3/3"};
  const char* gs[] = {"x", "2/3*pi*x^3", "1 - 2*x + x^(3/4)", "exp(x)*cos(x)", "sqrt(1 + x^2)"};
  for (int i = 0; i < 50; ++i) {
    nlohmann::json j;
    j["kind"] = unit(rng) < 0.5 ? "first" : "second";
    j["alpha"] = 0.01 + 0.98 * unit(rng);
    j["a"] = 0.0;
    j["b"] = 0.1 + 1.3 * unit(rng);
    j["z"] = j["b"].get<double>() * unit(rng);
    j["lambda"] = -3.0 + 6.0 * unit(rng);
    j["n"] = 1 + static_cast<int>(unit(rng) * 12);
    j["phi"] = phis[i % 5];
    j["g"] = gs[(i / 5) % 5];
    const Config c = parse_config(j.dump());
    expect_same_problem(c, parse_config(to_json(c).dump()));
  }
}
