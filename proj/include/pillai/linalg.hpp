#pragma once

// Dense real linear algebra: finite-valued vectors and row-major matrices,
// Gram matrices, column centering and Cholesky solves for SPD systems.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pillai/error.hpp"

namespace pillai {

/// Accumulator type for every inner product in the library.
using accumulator = long double;

namespace detail {

inline void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NonFiniteValue(std::string(what) + ": non-finite entry at index " +
                           std::to_string(i));
    }
  }
}

}  // namespace detail

class Vector {
 public:
  explicit Vector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
      throw std::invalid_argument("Vector: length must be positive");
    }
    detail::require_finite(entries_, "Vector");
  }

  Vector(std::initializer_list<double> entries)
      : Vector(std::vector<double>(entries)) {}

  static Vector constant(std::size_t len, double value) {
    return Vector(std::vector<double>(len, value));
  }

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> values() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> entries_;
};

class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) {
      throw std::invalid_argument("Matrix: dimensions must be positive");
    }
    if (entries_.size() != rows_ * cols_) {
      throw std::invalid_argument("Matrix: expected " +
                                  std::to_string(rows_ * cols_) +
                                  " entries, got " +
                                  std::to_string(entries_.size()));
    }
    detail::require_finite(entries_, "Matrix");
  }

  /// Row-major nested initializer, for tests and small literals.
  Matrix(std::initializer_list<std::initializer_list<double>> rows)
      : Matrix(flatten(rows)) {}

  static Matrix zeros(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols, std::vector<double>(rows * cols, 0.0));
  }

  static Matrix identity(std::size_t n) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return Matrix(n, n, std::move(e));
  }

  static Matrix from_columns(std::span<const Vector> columns) {
    if (columns.empty()) {
      throw std::invalid_argument("Matrix::from_columns: no columns");
    }
    const std::size_t rows = columns.front().size();
    std::vector<double> e(rows * columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) {
        throw std::invalid_argument("Matrix::from_columns: ragged columns");
      }
      for (std::size_t i = 0; i < rows; ++i) e[i * columns.size() + j] = columns[j][i];
    }
    return Matrix(rows, columns.size(), std::move(e));
  }

  static Matrix column_vector(const Vector& v) {
    return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(entries_).subspan(i * cols_, cols_);
  }

  Vector column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return Vector(std::move(c));
  }

  Matrix transpose() const {
    std::vector<double> t(entries_.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = (*this)(i, j);
    return Matrix(cols_, rows_, std::move(t));
  }

  bool operator==(const Matrix&) const = default;

 private:
  struct Flat {
    std::size_t rows;
    std::size_t cols;
    std::vector<double> entries;
  };

  explicit Matrix(Flat f) : Matrix(f.rows, f.cols, std::move(f.entries)) {}

  static Flat flatten(
      std::initializer_list<std::initializer_list<double>> rows) {
    Flat f{rows.size(), rows.size() ? rows.begin()->size() : 0, {}};
    for (const auto& r : rows) {
      if (r.size() != f.cols) {
        throw std::invalid_argument("Matrix: ragged initializer");
      }
      f.entries.insert(f.entries.end(), r.begin(), r.end());
    }
    return f;
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

// ---------------------------------------------------------------------------
// Elementary operations

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  accumulator acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<accumulator>(a[i]) * b[i];
  }
  return static_cast<double>(acc);
}

inline double dot(const Vector& a, const Vector& b) {
  return dot(a.values(), b.values());
}

inline double mean(std::span<const double> v) {
  accumulator acc = 0;
  for (double e : v) acc += e;
  return static_cast<double>(acc / static_cast<accumulator>(v.size()));
}

inline double mean(const Vector& v) { return mean(v.values()); }

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

/// v - mean(v) * 1
inline Vector center(const Vector& v) {
  const double m = mean(v);
  std::vector<double> c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i] - m;
  return Vector(std::move(c));
}

/// True when v carries no variation beyond the rounding of its own mean.
inline bool is_constant(const Vector& v) {
  const double scale = max_abs(v.values());
  if (scale == 0.0) return true;
  const Vector c = center(v);
  const double spread = max_abs(c.values());
  return spread <= 4.0 * static_cast<double>(v.size()) *
                       std::numeric_limits<double>::epsilon() * scale;
}

inline Vector add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: length mismatch");
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return Vector(std::move(r));
}

inline Vector subtract(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("subtract: length mismatch");
  }
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return Vector(std::move(r));
}

/// A * B
inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("multiply: inner dimension mismatch");
  }
  std::vector<double> r(a.rows() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      accumulator acc = 0;
      for (std::size_t l = 0; l < a.cols(); ++l) {
        acc += static_cast<accumulator>(a(i, l)) * b(l, j);
      }
      r[i * b.cols() + j] = static_cast<double>(acc);
    }
  }
  return Matrix(a.rows(), b.cols(), std::move(r));
}

/// A * v
inline Vector multiply(const Matrix& a, const Vector& v) {
  if (a.cols() != v.size()) {
    throw std::invalid_argument("multiply: inner dimension mismatch");
  }
  std::vector<double> r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) r[i] = dot(a.row(i), v.values());
  return Vector(std::move(r));
}

/// A^T v, without materializing the transpose.
inline Vector multiply_transposed(const Matrix& a, const Vector& v) {
  if (a.rows() != v.size()) {
    throw std::invalid_argument("multiply_transposed: dimension mismatch");
  }
  std::vector<accumulator> acc(a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      acc[j] += static_cast<accumulator>(a(i, j)) * v[i];
    }
  }
  std::vector<double> r(acc.begin(), acc.end());
  return Vector(std::move(r));
}

inline Matrix subtract(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("subtract: dimension mismatch");
  }
  std::vector<double> r(a.entries().begin(), a.entries().end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b.entries()[i];
  return Matrix(a.rows(), a.cols(), std::move(r));
}

/// (A + A^T) / 2 for square A.
inline Matrix symmetrize(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("symmetrize: not square");
  const std::size_t n = a.rows();
  std::vector<double> r(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i * n + j] = 0.5 * (a(i, j) + a(j, i));
  return Matrix(n, n, std::move(r));
}

inline double trace(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("trace: not square");
  accumulator acc = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, i);
  return static_cast<double>(acc);
}

inline double max_abs_difference(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_difference: dimension mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Centering and Gram matrices

/// (I - 11^T/n) M: every column shifted to mean zero.
inline Matrix center_columns(const Matrix& m) {
  std::vector<accumulator> sums(m.cols(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) sums[j] += m(i, j);
  std::vector<double> means(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    means[j] = static_cast<double>(sums[j] / static_cast<accumulator>(m.rows()));
  }
  std::vector<double> r(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i * m.cols() + j] = m(i, j) - means[j];
  return Matrix(m.rows(), m.cols(), std::move(r));
}

/// M^T M. The upper triangle is computed and mirrored, so the result is
/// exactly symmetric.
inline Matrix gram(const Matrix& m) {
  const std::size_t k = m.cols();
  std::vector<accumulator> acc(k * k, 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t a = 0; a < k; ++a) {
      const accumulator ra = r[a];
      for (std::size_t b = a; b < k; ++b) acc[a * k + b] += ra * r[b];
    }
  }
  std::vector<double> g(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      g[a * k + b] = g[b * k + a] = static_cast<double>(acc[a * k + b]);
    }
  }
  return Matrix(k, k, std::move(g));
}

/// Y^T (I - 11^T/n) Y
inline Matrix centered_gram(const Matrix& y) { return gram(center_columns(y)); }

// ---------------------------------------------------------------------------
// SPD solves

/// Relative pivot threshold: a pivot below this times the largest diagonal
/// entry of S marks S as not positive definite.
inline constexpr double kPivotTolerance = 1e-12;

/// Lower-triangular Cholesky factor L with S = L L^T.
class Cholesky {
 public:
  explicit Cholesky(const Matrix& s) : n_(s.rows()), l_(n_ * n_, 0.0) {
    if (s.rows() != s.cols()) {
      throw std::invalid_argument("Cholesky: matrix is not square");
    }
    const double symmetry_tol = 1e-10 * max_abs(s.entries());
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      max_diag = std::max(max_diag, s(i, i));
      for (std::size_t j = 0; j < i; ++j) {
        if (std::abs(s(i, j) - s(j, i)) > symmetry_tol) {
          throw std::invalid_argument("Cholesky: matrix is not symmetric");
        }
      }
    }
    const double threshold = kPivotTolerance * max_diag;
    for (std::size_t j = 0; j < n_; ++j) {
      accumulator d = s(j, j);
      for (std::size_t p = 0; p < j; ++p) {
        d -= static_cast<accumulator>(l_[j * n_ + p]) * l_[j * n_ + p];
      }
      if (!(d > threshold) || max_diag <= 0.0) throw NotPositiveDefinite(j);
      const double ljj = std::sqrt(static_cast<double>(d));
      l_[j * n_ + j] = ljj;
      for (std::size_t i = j + 1; i < n_; ++i) {
        accumulator v = s(i, j);
        for (std::size_t p = 0; p < j; ++p) {
          v -= static_cast<accumulator>(l_[i * n_ + p]) * l_[j * n_ + p];
        }
        l_[i * n_ + j] = static_cast<double>(v / ljj);
      }
    }
  }

  std::size_t size() const noexcept { return n_; }

  Matrix factor() const { return Matrix(n_, n_, l_); }

  Vector solve(const Vector& rhs) const {
    if (rhs.size() != n_) throw std::invalid_argument("Cholesky::solve: size mismatch");
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return Vector(std::move(x));
  }

  /// Solves S X = Rhs column by column.
  Matrix solve(const Matrix& rhs) const {
    if (rhs.rows() != n_) throw std::invalid_argument("Cholesky::solve: size mismatch");
    std::vector<double> out(rhs.rows() * rhs.cols());
    std::vector<double> col(n_);
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
      for (std::size_t i = 0; i < n_; ++i) col[i] = rhs(i, j);
      solve_in_place(col);
      for (std::size_t i = 0; i < n_; ++i) out[i * rhs.cols() + j] = col[i];
    }
    return Matrix(rhs.rows(), rhs.cols(), std::move(out));
  }

 private:
  void solve_in_place(std::vector<double>& x) const {
    for (std::size_t i = 0; i < n_; ++i) {
      accumulator v = x[i];
      for (std::size_t p = 0; p < i; ++p) v -= static_cast<accumulator>(l_[i * n_ + p]) * x[p];
      x[i] = static_cast<double>(v / l_[i * n_ + i]);
    }
    for (std::size_t i = n_; i-- > 0;) {
      accumulator v = x[i];
      for (std::size_t p = i + 1; p < n_; ++p) v -= static_cast<accumulator>(l_[p * n_ + i]) * x[p];
      x[i] = static_cast<double>(v / l_[i * n_ + i]);
    }
  }

  std::size_t n_;
  std::vector<double> l_;
};

/// Solves S X = Rhs for symmetric positive definite S via Cholesky.
inline Matrix spd_solve(const Matrix& s, const Matrix& rhs) {
  return Cholesky(s).solve(rhs);
}

inline Vector spd_solve(const Matrix& s, const Vector& rhs) {
  return Cholesky(s).solve(rhs);
}

/// Applies T^{-1} to Rhs, where T = Y^T (I - 11^T/n) Y. Throws
/// NotPositiveDefinite when the centered columns of Y are collinear.
inline Matrix centered_gram_inverse_apply(const Matrix& y, const Matrix& rhs) {
  return spd_solve(centered_gram(y), rhs);
}

}  // namespace pillai
