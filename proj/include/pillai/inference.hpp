#pragma once

// Exact and approximate inference for the effect. Under the Gaussian null the
// effect follows Beta(k/2, (n-k-1)/2); the F statistic of the reversed
// regression maps one-to-one onto it, and the Wald test replaces the Beta law
// by a Gaussian with the same mean and variance.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "pillai/error.hpp"
#include "pillai/regression.hpp"

namespace pillai {

class BetaParams {
 public:
  BetaParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha_ > 0.0) || !(beta_ > 0.0) || !std::isfinite(alpha_) ||
        !std::isfinite(beta_)) {
      throw std::invalid_argument("BetaParams: shape parameters must be positive");
    }
  }

  /// Null law of the effect: Beta(k/2, (n-k-1)/2).
  static BetaParams null_effect(std::size_t n, std::size_t k) {
    if (k < 1) throw std::invalid_argument("BetaParams: k must be >= 1");
    if (n < k + 2) throw TooFewRows(n, k);
    return BetaParams(static_cast<double>(k) / 2.0,
                      static_cast<double>(n - k - 1) / 2.0);
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  double mean() const noexcept { return alpha_ / (alpha_ + beta_); }
  double variance() const noexcept {
    const double s = alpha_ + beta_;
    return alpha_ * beta_ / (s * s * (s + 1.0));
  }

  BetaParams swapped() const { return BetaParams(beta_, alpha_); }

  bool operator==(const BetaParams&) const = default;

 private:
  double alpha_;
  double beta_;
};

struct WaldResult {
  double z;
  double p;
};

struct InferenceReport {
  std::size_t n;
  std::size_t k;
  double effect;  ///< beta = V = R^2
  double f_stat;  ///< +inf for a perfect fit
  std::size_t df1;
  std::size_t df2;
  BetaParams beta_params;
  double p_exact;
  double wald_z;
  double p_wald;
};

// ---------------------------------------------------------------------------
// Special functions

/// log Gamma(x) for x > 0 by the Lanczos approximation (g = 7, 9 terms),
/// with the reflection formula below 1/2.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
           log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double a = kCoef[0];
  for (std::size_t i = 1; i < kCoef.size(); ++i) {
    a += kCoef[i] / (z + static_cast<double>(i));
  }
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(a);
}

inline double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

namespace detail {

/// Continued fraction for I_x(a, b), evaluated by the modified Lentz method.
inline double incomplete_beta_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 20000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double dm = static_cast<double>(m);
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) return h;
  }
  throw ConsistencyError("incomplete beta continued fraction did not converge");
}

/// (I_x(a, b), 1 - I_x(a, b)), each side computed without cancellation on
/// the branch where it is the directly evaluated one.
inline std::pair<double, double> incomplete_beta_tails(double x,
                                                       const BetaParams& p) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("incomplete beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return {0.0, 1.0};
  if (x == 1.0) return {1.0, 0.0};
  const double a = p.alpha();
  const double b = p.beta();
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = std::clamp(front * incomplete_beta_fraction(a, b, x) / a, 0.0, 1.0);
    return {lower, 1.0 - lower};
  }
  const double upper =
      std::clamp(front * incomplete_beta_fraction(b, a, 1.0 - x) / b, 0.0, 1.0);
  return {1.0 - upper, upper};
}

}  // namespace detail

/// Regularized incomplete beta function I_x(alpha, beta), the Beta CDF.
inline double regularized_incomplete_beta(double x, const BetaParams& p) {
  return detail::incomplete_beta_tails(x, p).first;
}

/// 1 - I_x(alpha, beta), the Beta survival function.
inline double beta_upper_tail(double x, const BetaParams& p) {
  return detail::incomplete_beta_tails(x, p).second;
}

/// P(F > f) for F ~ F(df1, df2), via I_{df2/(df2 + df1 f)}(df2/2, df1/2).
inline double f_upper_tail(double f, double df1, double df2) {
  if (!(f >= 0.0)) throw std::domain_error("f_upper_tail: f must be >= 0");
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(df2 / (df2 + df1 * f),
                                     BetaParams(df2 / 2.0, df1 / 2.0));
}

/// Standard normal survival function.
inline double gaussian_upper_tail(double z) {
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

// ---------------------------------------------------------------------------
// The F <-> R^2 map

namespace detail {

inline void require_design(std::size_t n, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (n < k + 2) throw TooFewRows(n, k);
}

inline double checked_effect(double effect) {
  if (!(effect >= -kUnitIntervalSlack && effect <= 1.0 + kUnitIntervalSlack)) {
    throw std::domain_error("effect must lie in [0, 1], got " +
                            std::to_string(effect));
  }
  return std::clamp(effect, 0.0, 1.0);
}

}  // namespace detail

/// F = (R^2 / k) / ((1 - R^2) / (n - k - 1)). Throws DegenerateFit at R^2 = 1.
inline double f_from_r2(double r2, std::size_t n, std::size_t k) {
  detail::require_design(n, k);
  if (!(r2 >= 0.0 && r2 <= 1.0)) {
    throw std::domain_error("f_from_r2: R^2 must lie in [0, 1)");
  }
  if (r2 == 1.0) throw DegenerateFit("R^2 = 1: the F statistic is infinite");
  const double df2 = static_cast<double>(n - k - 1);
  return (r2 / static_cast<double>(k)) / ((1.0 - r2) / df2);
}

/// R^2 = k F / ((n - k - 1) + k F)
inline double r2_from_f(double f, std::size_t n, std::size_t k) {
  detail::require_design(n, k);
  if (!(f >= 0.0)) throw std::domain_error("r2_from_f: F must be >= 0");
  if (std::isinf(f)) return 1.0;
  const double kf = static_cast<double>(k) * f;
  return kf / (static_cast<double>(n - k - 1) + kf);
}

// ---------------------------------------------------------------------------
// Tests. Both are one-sided upper: the effect is nonnegative and grows under
// the alternative.

/// P(B >= effect) for B ~ Beta(k/2, (n-k-1)/2).
inline double exact_p_value(double effect, std::size_t n, std::size_t k) {
  return beta_upper_tail(detail::checked_effect(effect),
                         BetaParams::null_effect(n, k));
}

/// Wald test with the null Beta mean and standard deviation. z is not
/// truncated at the boundaries of [0, 1].
inline WaldResult wald_test(double effect, std::size_t n, std::size_t k) {
  const double e = detail::checked_effect(effect);
  const BetaParams p = BetaParams::null_effect(n, k);
  const double z = (e - p.mean()) / std::sqrt(p.variance());
  return WaldResult{z, gaussian_upper_tail(z)};
}

/// Effects at least this close to 1 are treated as a perfect fit.
inline constexpr double kPerfectFitTolerance = 1e-12;

inline bool is_perfect_fit(double effect) {
  return 1.0 - effect <= kPerfectFitTolerance;
}

/// Full inference for an effect. A perfect fit reports F = +inf and
/// p_exact = 0.
inline InferenceReport infer(double effect, std::size_t n, std::size_t k) {
  detail::require_design(n, k);
  const double e = detail::checked_effect(effect);
  const WaldResult wald = wald_test(e, n, k);
  const bool perfect = is_perfect_fit(e);
  return InferenceReport{
      .n = n,
      .k = k,
      .effect = e,
      .f_stat = perfect ? std::numeric_limits<double>::infinity()
                        : f_from_r2(e, n, k),
      .df1 = k,
      .df2 = n - k - 1,
      .beta_params = BetaParams::null_effect(n, k),
      .p_exact = perfect ? 0.0 : exact_p_value(e, n, k),
      .wald_z = wald.z,
      .p_wald = wald.p,
  };
}

}  // namespace pillai
