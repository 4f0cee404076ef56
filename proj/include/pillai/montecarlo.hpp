#pragma once

// Monte Carlo validation of the Beta null law and calibration of the exact
// and Wald tests. Every replicate draws x ~ N(0, I_n) and Y with iid N(0, 1)
// entries from its own derived stream; under an alternative x is shifted by
// theta * Y e_1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pillai/error.hpp"
#include "pillai/inference.hpp"
#include "pillai/linalg.hpp"
#include "pillai/random.hpp"
#include "pillai/regression.hpp"

namespace pillai {

struct SimConfig {
  std::size_t n = 50;
  std::size_t k = 3;
  std::size_t replicates = 10000;
  std::uint64_t seed = 1;
  double effect_strength = 0.0;
  /// Worker threads; 0 picks the hardware concurrency. Does not affect results.
  unsigned threads = 0;

  void validate() const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (n < k + 2) {
      throw std::invalid_argument("n must be >= k + 2 (n = " +
                                  std::to_string(n) + ", k = " +
                                  std::to_string(k) + ")");
    }
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (!(effect_strength >= 0.0) || !std::isfinite(effect_strength)) {
      throw std::invalid_argument("effect strength must be a finite value >= 0");
    }
  }
};

struct SimulationRun {
  Vector effects;
  /// Draws rejected as degenerate and redrawn with a bumped sub-seed.
  std::size_t degenerate_draws = 0;
};

struct CalibrationReport {
  std::size_t n;
  std::size_t k;
  std::size_t replicates;
  std::uint64_t seed;
  double effect_strength;
  std::size_t degenerate_draws;
  double empirical_mean;
  double empirical_var;
  double ks_distance;      ///< effects vs Beta(k/2, (n-k-1)/2)
  double p_uniformity_ks;  ///< exact p-values vs Uniform(0, 1)
  double rejection_rate_at_05_exact;
  double rejection_rate_at_05_wald;
};

namespace detail {

struct ReplicateOutcome {
  double effect;
  std::size_t rejected;
};

inline constexpr std::size_t kMaxRedraws = 64;

inline ReplicateOutcome run_replicate(const SimConfig& config,
                                      std::uint64_t index) {
  const std::size_t n = config.n;
  const std::size_t k = config.k;
  for (std::size_t attempt = 0; attempt < kMaxRedraws; ++attempt) {
    GaussianSampler gauss(derive_stream(config.seed, index, attempt));
    std::vector<double> x(n);
    for (double& v : x) v = gauss();
    std::vector<double> y(n * k);
    for (double& v : y) v = gauss();
    if (config.effect_strength > 0.0) {
      for (std::size_t i = 0; i < n; ++i) x[i] += config.effect_strength * y[i * k];
    }
    try {
      return {beta_effect(Vector(std::move(x)), Matrix(n, k, std::move(y))),
              attempt};
    } catch (const NumericalError&) {
      continue;
    }
  }
  throw ConsistencyError("replicate " + std::to_string(index) + " degenerate after " +
                         std::to_string(kMaxRedraws) + " redraws");
}

}  // namespace detail

/// Effects for `config.replicates` independent draws, in replicate order.
/// The output does not depend on `config.threads`.
inline SimulationRun simulate(const SimConfig& config) {
  config.validate();
  std::vector<detail::ReplicateOutcome> out(config.replicates);
  unsigned workers = config.threads ? config.threads
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, config.replicates));

  if (workers <= 1) {
    for (std::size_t r = 0; r < config.replicates; ++r) {
      out[r] = detail::run_replicate(config, r);
    }
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t r = w; r < config.replicates; r += workers) {
              out[r] = detail::run_replicate(config, r);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<double> effects(config.replicates);
  std::size_t rejected = 0;
  for (std::size_t r = 0; r < config.replicates; ++r) {
    effects[r] = out[r].effect;
    rejected += out[r].rejected;
  }
  return SimulationRun{Vector(std::move(effects)), rejected};
}

/// Null simulation; `config.effect_strength` must be zero.
inline SimulationRun simulate_null(const SimConfig& config) {
  if (config.effect_strength != 0.0) {
    throw std::invalid_argument("simulate_null: effect strength must be 0");
  }
  return simulate(config);
}

/// Kolmogorov-Smirnov sup distance between the empirical CDF of `sample` and
/// a continuous reference CDF.
template <typename Cdf>
double ks_distance(std::span<const double> sample, Cdf&& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double i_d = static_cast<double>(i);
    d = std::max({d, (i_d + 1.0) / m - f, f - i_d / m});
  }
  return d;
}

inline double ks_against_beta(const Vector& effects, const BetaParams& p) {
  for (double e : effects) {
    if (!(e >= 0.0 && e <= 1.0)) {
      throw std::domain_error("ks_against_beta: effects must lie in [0, 1]");
    }
  }
  return ks_distance(effects.values(),
                     [&](double e) { return regularized_incomplete_beta(e, p); });
}

inline double ks_against_uniform(std::span<const double> values) {
  return ks_distance(values, [](double u) { return std::clamp(u, 0.0, 1.0); });
}

/// Asymptotic Kolmogorov critical value sqrt(-ln(q/2)/2) / sqrt(m).
inline double ks_critical_value(double q, std::size_t m) {
  return std::sqrt(-0.5 * std::log(q / 2.0)) / std::sqrt(static_cast<double>(m));
}

/// Fraction of p-values at or below `level`.
inline double rejection_rate(std::span<const double> p_values, double level) {
  const auto hits = std::count_if(p_values.begin(), p_values.end(),
                                  [&](double p) { return p <= level; });
  return static_cast<double>(hits) / static_cast<double>(p_values.size());
}

/// Exact p-values of every effect in `effects`.
inline std::vector<double> exact_p_values(const Vector& effects, std::size_t n,
                                          std::size_t k) {
  std::vector<double> p(effects.size());
  for (std::size_t i = 0; i < effects.size(); ++i) {
    p[i] = exact_p_value(std::clamp(effects[i], 0.0, 1.0), n, k);
  }
  return p;
}

inline CalibrationReport calibrate(const SimConfig& config) {
  const SimulationRun run = simulate(config);
  const Vector& effects = run.effects;
  const std::size_t m = effects.size();
  const BetaParams null = BetaParams::null_effect(config.n, config.k);

  std::vector<double> clamped(effects.begin(), effects.end());
  for (double& e : clamped) e = std::clamp(e, 0.0, 1.0);
  const Vector clamped_v(clamped);

  const double mu = mean(effects);
  accumulator ss = 0;
  for (double e : effects) ss += static_cast<accumulator>(e - mu) * (e - mu);
  const double var = m > 1 ? static_cast<double>(ss / static_cast<accumulator>(m - 1)) : 0.0;

  const std::vector<double> p_exact = exact_p_values(clamped_v, config.n, config.k);
  std::vector<double> p_wald(m);
  for (std::size_t i = 0; i < m; ++i) {
    p_wald[i] = wald_test(clamped[i], config.n, config.k).p;
  }

  return CalibrationReport{
      .n = config.n,
      .k = config.k,
      .replicates = config.replicates,
      .seed = config.seed,
      .effect_strength = config.effect_strength,
      .degenerate_draws = run.degenerate_draws,
      .empirical_mean = mu,
      .empirical_var = var,
      .ks_distance = ks_against_beta(clamped_v, null),
      .p_uniformity_ks = ks_against_uniform(p_exact),
      .rejection_rate_at_05_exact = rejection_rate(p_exact, 0.05),
      .rejection_rate_at_05_wald = rejection_rate(p_wald, 0.05),
  };
}

}  // namespace pillai
