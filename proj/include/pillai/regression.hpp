#pragma once

// The reversed multiple regression x = a 1 + Y b + e, the score s = Y b,
// and the simple regression of the score on x whose slope is the effect.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pillai/error.hpp"
#include "pillai/linalg.hpp"

namespace pillai {

/// Slack allowed on quantities that are bounded to [0, 1] in exact arithmetic.
inline constexpr double kUnitIntervalSlack = 1e-10;

struct MultiRegressionFit {
  double intercept;
  Vector coefficients;  ///< length k
  Vector score;         ///< Y * coefficients
  Vector fitted;        ///< intercept * 1 + score
  Vector residuals;     ///< x - fitted
  double r_squared;
};

struct SimpleRegressionFit {
  double intercept;
  double slope;
  double r_squared;
};

namespace detail {

inline void require_rows(std::size_t n, std::size_t k) {
  if (n < k + 2) throw TooFewRows(n, k);
}

}  // namespace detail

/// Least-squares fit of x on (1, Y) through the (k+1)x(k+1) normal equations.
///
/// Throws DegenerateX when x is constant and RankDeficient when (1, Y) is
/// singular; RankDeficient::column() names the first Y column at which the
/// Cholesky pivot failed.
inline MultiRegressionFit fit_multiple(const Vector& x, const Matrix& y) {
  const std::size_t n = x.size();
  const std::size_t k = y.cols();
  if (y.rows() != n) {
    throw std::invalid_argument("fit_multiple: x and Y row counts differ");
  }
  detail::require_rows(n, k);
  if (is_constant(x)) {
    throw DegenerateX("x is constant; R^2 and the effect are undefined");
  }

  // A^T A and A^T x for A = (1, Y).
  const std::size_t p = k + 1;
  std::vector<accumulator> ata(p * p, 0);
  std::vector<accumulator> atx(p, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = y.row(i);
    const accumulator xi = x[i];
    ata[0] += 1;
    atx[0] += xi;
    for (std::size_t a = 0; a < k; ++a) {
      const accumulator ra = r[a];
      ata[a + 1] += ra;
      atx[a + 1] += ra * xi;
      for (std::size_t b = a; b < k; ++b) ata[(a + 1) * p + b + 1] += ra * r[b];
    }
  }
  std::vector<double> normal(p * p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a; b < p; ++b)
      normal[a * p + b] = normal[b * p + a] = static_cast<double>(ata[a * p + b]);

  Vector solution = Vector::constant(p, 0.0);
  try {
    solution = spd_solve(Matrix(p, p, std::move(normal)),
                         Vector(std::vector<double>(atx.begin(), atx.end())));
  } catch (const NotPositiveDefinite& e) {
    if (e.pivot() == 0) {
      throw RankDeficient(std::nullopt, "design (1, Y) is singular");
    }
    const std::size_t col = e.pivot() - 1;
    throw RankDeficient(col, "design (1, Y) is singular: Y column " +
                                 std::to_string(col) +
                                 " is constant or a linear combination of "
                                 "the preceding columns");
  }

  const double intercept = solution[0];
  std::vector<double> b(solution.begin() + 1, solution.end());
  Vector coefficients(std::move(b));
  Vector score = multiply(y, coefficients);
  std::vector<double> fitted(n);
  for (std::size_t i = 0; i < n; ++i) fitted[i] = intercept + score[i];
  Vector fitted_v(std::move(fitted));
  Vector residuals = subtract(x, fitted_v);

  const Vector xc = center(x);
  const double tss = dot(xc, xc);
  const double rss = dot(residuals, residuals);
  double r2 = 1.0 - rss / tss;
  if (r2 < -1e-12 || r2 > 1.0 + 1e-12) {
    throw ConsistencyError("fit_multiple: R^2 = " + std::to_string(r2) +
                           " outside [0, 1]");
  }
  r2 = std::clamp(r2, 0.0, 1.0);

  return MultiRegressionFit{intercept, std::move(coefficients), std::move(score),
                            std::move(fitted_v), std::move(residuals), r2};
}

/// Ordinary least squares of `response` on `predictor` with an intercept.
inline SimpleRegressionFit fit_simple(const Vector& response,
                                      const Vector& predictor) {
  const std::size_t n = response.size();
  if (predictor.size() != n) {
    throw std::invalid_argument("fit_simple: length mismatch");
  }
  if (n < 3) throw TooFewRows(n, 1);
  if (is_constant(predictor)) {
    throw DegenerateX("fit_simple: predictor is constant");
  }
  const double my = mean(response);
  const double mx = mean(predictor);
  const Vector xc = center(predictor);
  const Vector yc = center(response);
  const double sxx = dot(xc, xc);
  const double sxy = dot(xc, yc);
  const double syy = dot(yc, yc);
  const double slope = sxy / sxx;
  const double r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 0.0;
  return SimpleRegressionFit{my - slope * mx, slope, r2};
}

/// Slope of the score s = Y b on x. Equal to Pillai's trace of Y on x and to
/// the R^2 of the multiple regression.
inline double beta_effect(const MultiRegressionFit& fit, const Vector& x) {
  const double slope = fit_simple(fit.score, x).slope;
  if (!(slope >= -kUnitIntervalSlack && slope <= 1.0 + kUnitIntervalSlack)) {
    throw ConsistencyError("beta_effect: slope " + std::to_string(slope) +
                           " outside [0, 1]");
  }
  return slope;
}

inline double beta_effect(const Vector& x, const Matrix& y) {
  return beta_effect(fit_multiple(x, y), x);
}

}  // namespace pillai
