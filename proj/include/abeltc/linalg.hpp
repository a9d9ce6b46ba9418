#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "abeltc/error.hpp"

namespace abeltc::linalg {

inline constexpr double default_rank_tol = 1e-12;

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ValidationError("ragged matrix initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const { return data_; }

  std::vector<double> multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw ValidationError("dimension mismatch in matrix-vector product");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double norm2(std::span<const double> v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

namespace detail {

// Reflector H = I - beta v v^T with H x = (alpha, 0, ..., 0).
struct Reflector {
  std::vector<double> v;
  double beta = 0.0;
  double alpha = 0.0;
};

inline Reflector make_reflector(std::vector<double> x) {
  Reflector h;
  const double norm = norm2(x);
  if (norm == 0.0) {
    h.v = std::move(x);
    return h;
  }
  h.alpha = x[0] > 0.0 ? -norm : norm;
  x[0] -= h.alpha;
  double vtv = 0.0;
  for (double e : x) vtv += e * e;
  h.beta = 2.0 / vtv;
  h.v = std::move(x);
  return h;
}

}  // namespace detail

/// Householder QR with column pivoting: M P = Q R.
class PivotedQr {
 public:
  explicit PivotedQr(DenseMatrix m) : r_(std::move(m)), perm_(r_.cols()) {
    if (r_.empty()) throw ValidationError("cannot factor an empty matrix");
    const std::size_t rows = r_.rows();
    const std::size_t cols = r_.cols();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const std::size_t steps = std::min(rows, cols);
    reflectors_.reserve(steps);

    for (std::size_t k = 0; k < steps; ++k) {
      std::size_t pivot = k;
      double best = -1.0;
      std::vector<double> column(rows - k);
      for (std::size_t j = k; j < cols; ++j) {
        for (std::size_t i = k; i < rows; ++i) column[i - k] = r_(i, j);
        const double nrm = norm2(column);
        if (nrm > best) {
          best = nrm;
          pivot = j;
        }
      }
      if (pivot != k) {
        for (std::size_t i = 0; i < rows; ++i) std::swap(r_(i, k), r_(i, pivot));
        std::swap(perm_[k], perm_[pivot]);
      }

      for (std::size_t i = k; i < rows; ++i) column[i - k] = r_(i, k);
      detail::Reflector h = detail::make_reflector(std::move(column));
      if (h.beta != 0.0) {
        for (std::size_t j = k + 1; j < cols; ++j) {
          double dot = 0.0;
          for (std::size_t i = k; i < rows; ++i) dot += h.v[i - k] * r_(i, j);
          dot *= h.beta;
          for (std::size_t i = k; i < rows; ++i) r_(i, j) -= dot * h.v[i - k];
        }
        r_(k, k) = h.alpha;
      }
      for (std::size_t i = k + 1; i < rows; ++i) r_(i, k) = 0.0;
      reflectors_.push_back(std::move(h));
    }
  }

  std::size_t rows() const { return r_.rows(); }
  std::size_t cols() const { return r_.cols(); }

  /// Upper-trapezoidal factor R (in pivoted column order).
  const DenseMatrix& r() const { return r_; }
  const std::vector<std::size_t>& permutation() const { return perm_; }

  std::vector<double> r_diagonal() const {
    std::vector<double> d(reflectors_.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = r_(k, k);
    return d;
  }

  /// Number of diagonal entries with |R_kk| > rank_tol * |R_00|.
  std::size_t rank(double rank_tol = default_rank_tol) const {
    const auto d = r_diagonal();
    if (d.empty() || d[0] == 0.0) return 0;
    const double threshold = rank_tol * std::fabs(d[0]);
    std::size_t r = 0;
    while (r < d.size() && std::fabs(d[r]) > threshold) ++r;
    return r;
  }

  /// |R_00| / |R_kk| with k the last retained diagonal entry.
  double condition_estimate(double rank_tol = default_rank_tol) const {
    const std::size_t k = rank(rank_tol);
    if (k == 0) return std::numeric_limits<double>::infinity();
    return std::fabs(r_(0, 0)) / std::fabs(r_(k - 1, k - 1));
  }

  /// Q^T b.
  std::vector<double> apply_qt(std::span<const double> b) const {
    if (b.size() != rows()) throw ValidationError("dimension mismatch: rhs has " + std::to_string(b.size()) +
                                                  " entries, matrix has " + std::to_string(rows()) + " rows");
    std::vector<double> c(b.begin(), b.end());
    for (std::size_t k = 0; k < reflectors_.size(); ++k) {
      const auto& h = reflectors_[k];
      if (h.beta == 0.0) continue;
      double dot = 0.0;
      for (std::size_t i = k; i < c.size(); ++i) dot += h.v[i - k] * c[i];
      dot *= h.beta;
      for (std::size_t i = k; i < c.size(); ++i) c[i] -= dot * h.v[i - k];
    }
    return c;
  }

 private:
  DenseMatrix r_;
  std::vector<std::size_t> perm_;
  std::vector<detail::Reflector> reflectors_;
};

struct LsSolution {
  std::vector<double> x;
  std::size_t rank = 0;
  double residual_norm = 0.0;
  double condition_estimate = 1.0;
};

inline PivotedQr qr_factor_column_pivot(const DenseMatrix& m) { return PivotedQr(m); }

inline double condition_estimate(const PivotedQr& qr, double rank_tol = default_rank_tol) {
  return qr.condition_estimate(rank_tol);
}

/// Minimum-norm least-squares solution through a complete orthogonal
/// decomposition built on the pivoted QR.
inline LsSolution solve_min_norm_ls(const PivotedQr& qr, const DenseMatrix& m, std::span<const double> b,
                                    double rank_tol = default_rank_tol) {
  const std::size_t n = qr.cols();
  const std::size_t r = qr.rank(rank_tol);
  const std::vector<double> c = qr.apply_qt(b);

  LsSolution out;
  out.rank = r;
  out.condition_estimate = qr.condition_estimate(rank_tol);
  out.x.assign(n, 0.0);

  if (r > 0) {
    // T = R(0:r, 0:n); annihilate T(0:r, r:n) from the right, last row first.
    DenseMatrix t(r, n);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i; j < n; ++j) t(i, j) = qr.r()(i, j);
    }
    const std::size_t tail = n - r;
    std::vector<detail::Reflector> z(r);
    if (tail > 0) {
      for (std::size_t k = r; k-- > 0;) {
        std::vector<double> u(tail + 1);
        u[0] = t(k, k);
        for (std::size_t j = 0; j < tail; ++j) u[j + 1] = t(k, r + j);
        detail::Reflector h = detail::make_reflector(std::move(u));
        if (h.beta != 0.0) {
          for (std::size_t i = 0; i < k; ++i) {
            double dot = h.v[0] * t(i, k);
            for (std::size_t j = 0; j < tail; ++j) dot += h.v[j + 1] * t(i, r + j);
            dot *= h.beta;
            t(i, k) -= dot * h.v[0];
            for (std::size_t j = 0; j < tail; ++j) t(i, r + j) -= dot * h.v[j + 1];
          }
          t(k, k) = h.alpha;
          for (std::size_t j = 0; j < tail; ++j) t(k, r + j) = 0.0;
        }
        z[k] = std::move(h);
      }
    }

    std::vector<double> w(n, 0.0);
    for (std::size_t i = r; i-- > 0;) {
      double s = c[i];
      for (std::size_t j = i + 1; j < r; ++j) s -= t(i, j) * w[j];
      w[i] = s / t(i, i);
    }

    if (tail > 0) {
      for (std::size_t k = 0; k < r; ++k) {
        const auto& h = z[k];
        if (h.beta == 0.0) continue;
        double dot = h.v[0] * w[k];
        for (std::size_t j = 0; j < tail; ++j) dot += h.v[j + 1] * w[r + j];
        dot *= h.beta;
        w[k] -= dot * h.v[0];
        for (std::size_t j = 0; j < tail; ++j) w[r + j] -= dot * h.v[j + 1];
      }
    }

    const auto& perm = qr.permutation();
    for (std::size_t j = 0; j < n; ++j) out.x[perm[j]] = w[j];
  }

  std::vector<double> res = m.multiply(out.x);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= b[i];
  out.residual_norm = norm2(res);
  return out;
}

inline LsSolution solve_min_norm_ls(const DenseMatrix& m, std::span<const double> b,
                                    double rank_tol = default_rank_tol) {
  if (m.empty()) throw ValidationError("cannot solve with an empty matrix");
  if (b.size() != m.rows()) {
    throw ValidationError("dimension mismatch: rhs has " + std::to_string(b.size()) + " entries, matrix has " +
                          std::to_string(m.rows()) + " rows");
  }
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw NumericError("matrix has a non-finite entry");
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw NumericError("right-hand side has a non-finite entry");
  }

  // Rows of zeros do not affect the solution; factor without them so the
  // result is the same bit for bit whether or not they are present.
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    if (std::any_of(row.begin(), row.end(), [](double v) { return v != 0.0; })) kept.push_back(i);
  }
  if (kept.empty() || kept.size() == m.rows()) return solve_min_norm_ls(PivotedQr(m), m, b, rank_tol);
  DenseMatrix packed(kept.size(), m.cols());
  std::vector<double> packed_b(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    std::copy(m.row(kept[k]).begin(), m.row(kept[k]).end(), packed.row(k).begin());
    packed_b[k] = b[kept[k]];
  }
  LsSolution out = solve_min_norm_ls(PivotedQr(packed), packed, packed_b, rank_tol);
  std::vector<double> res = m.multiply(out.x);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= b[i];
  out.residual_norm = norm2(res);
  return out;
}

}  // namespace abeltc::linalg
