#pragma once

// Weakly singular moment integrals
//
//   I(x, j) = int_a^x (t - z)^j (phi(x) - phi(t))^(-alpha) dt
//
// evaluated with Gauss-Jacobi rules for the weight (1 - s)^(-alpha) on
// [-1, 1]. The map t = x - (x - a)(1 - s)/2 sends the singular endpoint
// t = x to s = 1, and the remaining factor
//
//   (t - z)^j * ((x - t) / (phi(x) - phi(t)))^alpha
//
// is smooth whenever phi is smooth and strictly increasing.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "abeltc/error.hpp"

namespace abeltc::quad {

using RealFunction = std::function<double(double)>;

/// Assembly node count for Taylor degree n.
inline int default_assembly_nodes(int n) { return std::max(32, 2 * n + 8); }
inline constexpr int residual_nodes = 96;
inline constexpr int manufactured_nodes = 128;
inline constexpr int max_rule_size = 512;

/// Relative threshold below which phi(x) - phi(t) is treated as cancelled.
inline constexpr double ratio_guard = 1e-12;

/// Total mass of (1 - s)^(-alpha) on [-1, 1].
inline double jacobi_weight_mass(double alpha) { return std::pow(2.0, 1.0 - alpha) / (1.0 - alpha); }

/// m-point Gauss-Jacobi rule for the weight (1 - s)^(-alpha) on [-1, 1].
struct QuadratureRule {
  double alpha = 0.0;
  std::vector<double> nodes;    // strictly increasing, inside (-1, 1)
  std::vector<double> weights;  // positive

  std::size_t size() const { return nodes.size(); }
};

namespace detail {

// Implicit-shift QL on a symmetric tridiagonal matrix. On return `diag`
// holds the eigenvalues and `first` the first components of the normalized
// eigenvectors. `off[i]` couples rows i and i+1; off.back() is ignored.
inline void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off, std::vector<double>& first) {
  const std::size_t n = diag.size();
  first.assign(n, 0.0);
  first[0] = 1.0;
  if (n == 1) return;
  off.back() = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const std::size_t max_iterations = 50 * n;
  std::size_t iterations = 0;

  for (std::size_t l = 0; l < n; ++l) {
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
        if (std::fabs(off[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iterations > max_iterations) {
        throw NumericError("tridiagonal eigensolver did not converge after " + std::to_string(max_iterations) +
                           " iterations");
      }
      double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
      double r = std::hypot(g, 1.0);
      g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t ii = m; ii-- > l;) {
        double f = s * off[ii];
        const double b = c * off[ii];
        r = std::hypot(f, g);
        off[ii + 1] = r;
        if (r == 0.0) {
          diag[ii + 1] -= p;
          off[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[ii + 1] - p;
        r = (diag[ii] - g) * s + 2.0 * c * b;
        p = s * r;
        diag[ii + 1] = g + p;
        g = c * r - b;
        f = first[ii + 1];
        first[ii + 1] = s * first[ii] + c * f;
        first[ii] = c * first[ii] - s * f;
      }
      if (underflow) continue;
      diag[l] -= p;
      off[l] = g;
      off[m] = 0.0;
    }
  }
}

}  // namespace detail

/// Golub-Welsch construction from the three-term recurrence of the Jacobi
/// polynomials with parameters (-alpha, 0).
inline QuadratureRule jacobi_rule(int m, double alpha) {
  if (m < 1 || m > max_rule_size) {
    throw ValidationError("quadrature node count must be in [1, " + std::to_string(max_rule_size) + "], got " +
                          std::to_string(m));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must be in (0,1)");

  const double p = -alpha;
  const double q = 0.0;
  const auto n = static_cast<std::size_t>(m);
  std::vector<double> diag(n);
  std::vector<double> off(n, 0.0);
  diag[0] = (q - p) / (p + q + 2.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + p + q;
    diag[k] = (q * q - p * p) / (s * (s + 2.0));
    const double num = 4.0 * kk * (kk + p) * (kk + q) * (kk + p + q);
    off[k - 1] = std::sqrt(num / (s * s * (s + 1.0) * (s - 1.0)));
  }

  std::vector<double> first;
  detail::tridiagonal_ql(diag, off, first);

  const double mass = jacobi_weight_mass(alpha);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&diag](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

  QuadratureRule rule;
  rule.alpha = alpha;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  for (std::size_t i : order) {
    rule.nodes.push_back(diag[i]);
    rule.weights.push_back(mass * first[i] * first[i]);
  }
  return rule;
}

/// Process-wide cache of rules keyed by (m, alpha). Safe for concurrent use.
inline std::shared_ptr<const QuadratureRule> cached_jacobi_rule(int m, double alpha) {
  static std::shared_mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const QuadratureRule>> cache;
  const auto key = std::make_pair(m, alpha);
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(jacobi_rule(m, alpha));
  std::unique_lock lock(mutex);
  return cache.try_emplace(key, std::move(rule)).first->second;
}

/// (x - t) / (phi(x) - phi(t)), falling back to 1 / phi'((x + t) / 2) when
/// the difference has cancelled below the guard threshold.
template <class Phi, class PhiPrime>
double near_singularity_ratio(double x, double t, const Phi& phi, const PhiPrime& phi_prime) {
  const double fx = phi(x);
  const double diff = fx - phi(t);
  if (std::fabs(diff) > ratio_guard * std::max(std::fabs(fx), 1.0)) {
    if (diff <= 0.0 || x <= t) {
      throw NumericError("phi is not strictly increasing: phi(" + std::to_string(x) + ") - phi(" + std::to_string(t) +
                         ") <= 0");
    }
    return (x - t) / diff;
  }
  const double slope = phi_prime(0.5 * (x + t));
  if (!(slope > 0.0)) {
    throw NumericError("phi'(" + std::to_string(0.5 * (x + t)) + ") is not positive; phi must be strictly increasing");
  }
  return 1.0 / slope;
}

/// Visits the quadrature nodes of int_a^x f(t) (phi(x) - phi(t))^(-alpha) dt,
/// calling visit(t, w) where w already carries the Jacobi weight, the
/// interval scaling and the smooth ratio factor.
template <class Phi, class PhiPrime, class Visit>
void for_each_singular_node(double x, double a, double alpha, const Phi& phi, const PhiPrime& phi_prime, int m,
                            Visit&& visit) {
  if (m < 4) throw ValidationError("singular integrals need at least 4 quadrature nodes, got " + std::to_string(m));
  if (x < a) throw ValidationError("upper limit x must not be below the lower limit a");
  if (x == a) return;
  const auto rule = cached_jacobi_rule(m, alpha);
  const double half = 0.5 * (x - a);
  const double scale = std::pow(half, 1.0 - alpha);
  for (std::size_t i = 0; i < rule->size(); ++i) {
    const double t = x - half * (1.0 - rule->nodes[i]);
    const double ratio = near_singularity_ratio(x, t, phi, phi_prime);
    visit(t, scale * rule->weights[i] * std::pow(ratio, alpha));
  }
}

/// I(x, j) for j = 0..max_j by Gauss-Jacobi quadrature.
template <class Phi, class PhiPrime>
std::vector<double> singular_moments(double x, int max_j, double z, double a, double alpha, const Phi& phi,
                                     const PhiPrime& phi_prime, int m) {
  std::vector<double> out(static_cast<std::size_t>(max_j) + 1, 0.0);
  for_each_singular_node(x, a, alpha, phi, phi_prime, m, [&out, z](double t, double w) {
    double power = 1.0;
    for (double& slot : out) {
      slot += power * w;
      power *= t - z;
    }
  });
  return out;
}

/// int_a^x f(t) (phi(x) - phi(t))^(-alpha) dt for a smooth f.
template <class F, class Phi, class PhiPrime>
double singular_weighted_integral(double x, double a, double alpha, const F& f, const Phi& phi,
                                  const PhiPrime& phi_prime, int m) {
  double sum = 0.0;
  for_each_singular_node(x, a, alpha, phi, phi_prime, m, [&sum, &f](double t, double w) { sum += f(t) * w; });
  return sum;
}

/// Closed form of I(x, j) for phi(t) = t:
///   sum_k C(j,k) (x - z)^(j-k) (-1)^k (x - a)^(k+1-alpha) / (k + 1 - alpha).
inline double singular_integral_identity_phi(double x, int j, double z, double a, double alpha) {
  if (x < a) throw ValidationError("upper limit x must not be below the lower limit a");
  if (x == a) return 0.0;
  const double h = x - a;
  const double d = x - z;
  double binom = 1.0;
  double sum = 0.0;
  for (int k = 0; k <= j; ++k) {
    const double term = binom * std::pow(d, j - k) * std::pow(h, k + 1 - alpha) / (k + 1 - alpha);
    sum += (k % 2 == 0) ? term : -term;
    binom = binom * (j - k) / (k + 1);
  }
  return sum;
}

inline std::vector<double> identity_phi_moments(double x, int max_j, double z, double a, double alpha) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(max_j) + 1);
  for (int j = 0; j <= max_j; ++j) out.push_back(singular_integral_identity_phi(x, j, z, a, alpha));
  return out;
}

struct SingularIntegralSpec {
  double x = 0.0;
  int j = 0;
  double z = 0.0;
  double a = 0.0;
  double alpha = 0.5;
  RealFunction phi;
  RealFunction phi_prime;
};

inline double singular_integral(const SingularIntegralSpec& spec, int m) {
  if (spec.x == spec.a) return 0.0;
  return singular_moments(spec.x, spec.j, spec.z, spec.a, spec.alpha, spec.phi, spec.phi_prime, m)
      [static_cast<std::size_t>(spec.j)];
}

}  // namespace abeltc::quad
