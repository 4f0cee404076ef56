#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "pillai/montecarlo.hpp"

namespace pillai {
namespace {

TEST(Random, StreamsAreDeterministicAndDistinct) {
  SplitMix64 a = derive_stream(1, 0);
  SplitMix64 b = derive_stream(1, 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t r = 0; r < 64; ++r)
      for (std::uint64_t t = 0; t < 4; ++t) firsts.insert(derive_stream(s, r, t)());
  EXPECT_EQ(firsts.size(), 4u * 64u * 4u);
}

TEST(Random, GaussianMoments) {
  GaussianSampler g(derive_stream(7, 0));
  const int m = 200000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < m; ++i) {
    const double z = g();
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / m, 0.0, 5.0 / std::sqrt(m));
  EXPECT_NEAR(s2 / m, 1.0, 5.0 * std::sqrt(2.0 / m));
}

TEST(SimulateNull, SingleReplicateInRange) {
  for (std::uint64_t seed : {0ull, 1ull, 99ull, 123456789ull}) {
    const SimulationRun run = simulate_null({.n = 10, .k = 2, .replicates = 1, .seed = seed});
    ASSERT_EQ(run.effects.size(), 1u);
    EXPECT_GE(run.effects[0], 0.0);
    EXPECT_LE(run.effects[0], 1.0);
  }
}

TEST(SimulateNull, DeterministicAcrossThreadCounts) {
  SimConfig c{.n = 30, .k = 4, .replicates = 500, .seed = 11};
  c.threads = 1;
  const Vector serial = simulate_null(c).effects;
  for (unsigned t : {2u, 3u, 8u}) {
    c.threads = t;
    EXPECT_EQ(simulate_null(c).effects, serial) << t << " threads";
  }
  c.seed = 12;
  EXPECT_NE(simulate_null(c).effects, serial);
}

TEST(SimulateNull, RejectsAlternativeAndBadConfig) {
  EXPECT_THROW(simulate_null({.n = 10, .k = 2, .replicates = 5, .seed = 1,
                              .effect_strength = 0.5}),
               std::invalid_argument);
  EXPECT_THROW(simulate({.n = 3, .k = 2, .replicates = 5, .seed = 1}),
               std::invalid_argument);
  EXPECT_THROW(simulate({.n = 10, .k = 2, .replicates = 0, .seed = 1}),
               std::invalid_argument);
  EXPECT_THROW(simulate({.n = 10, .k = 0, .replicates = 5, .seed = 1}),
               std::invalid_argument);
}

TEST(SimulateNull, MeanMatchesBetaMoments) {
  const SimulationRun run = simulate_null({.n = 50, .k = 3, .replicates = 10000, .seed = 3});
  const BetaParams p = BetaParams::null_effect(50, 3);
  EXPECT_NEAR(p.mean(), 3.0 / 49.0, 1e-16);
  EXPECT_NEAR(mean(run.effects), p.mean(), 3.0 * std::sqrt(p.variance() / 10000.0));
}

TEST(KsAgainstBeta, SinglePointAtMedian) {
  const double median = oracle::beta_quantile(0.5, 1.5, 23.0);
  EXPECT_NEAR(ks_against_beta(Vector{median}, BetaParams(1.5, 23.0)), 0.5, 1e-10);
}

TEST(KsAgainstBeta, PlugInQuantiles) {
  const std::size_t m = 50;
  std::vector<double> q(m);
  for (std::size_t i = 0; i < m; ++i) {
    q[i] = oracle::beta_quantile((static_cast<double>(i) + 0.5) / m, 2.0, 7.0);
  }
  EXPECT_LE(ks_against_beta(Vector(q), BetaParams(2.0, 7.0)), 0.5 / m + 1e-9);
}

TEST(KsAgainstBeta, NullSimulationBelowCriticalValue) {
  const SimulationRun run = simulate_null({.n = 50, .k = 3, .replicates = 10000, .seed = 5});
  EXPECT_NEAR(ks_critical_value(0.01, 10000), 0.0163, 1e-4);
  EXPECT_LT(ks_against_beta(run.effects, BetaParams(1.5, 23.0)), 0.0163);
}

TEST(KsAgainstBeta, RejectsOutOfRange) {
  EXPECT_THROW(ks_against_beta(Vector{0.5, 1.5}, BetaParams(1, 1)), std::domain_error);
}

TEST(Calibrate, NullSizeWithinBinomialBand) {
  const CalibrationReport r = calibrate({.n = 40, .k = 3, .replicates = 10000, .seed = 8});
  const double se = std::sqrt(0.05 * 0.95 / 10000.0);
  EXPECT_NEAR(r.rejection_rate_at_05_exact, 0.05, 3.0 * se);
  EXPECT_LT(r.p_uniformity_ks, ks_critical_value(0.01, 10000));
  EXPECT_GE(r.ks_distance, 0.0);
  EXPECT_LE(r.ks_distance, 1.0);
  EXPECT_EQ(r.degenerate_draws, 0u);
}

TEST(Calibrate, StrongSignalRejectsAlmostAlways) {
  const CalibrationReport r =
      calibrate({.n = 50, .k = 3, .replicates = 2000, .seed = 2, .effect_strength = 5.0});
  EXPECT_GT(r.rejection_rate_at_05_exact, 0.99);
  EXPECT_GT(r.rejection_rate_at_05_wald, 0.99);
}

TEST(Calibrate, WaldRateMatchesItsTheoreticalSize) {
  // The Wald test rejects when V > mu + z_0.95 sigma; under the null that
  // event has Beta probability computed here by quadrature.
  const std::size_t n = 200, k = 3, m = 10000;
  const BetaParams p = BetaParams::null_effect(n, k);
  const double cut = p.mean() + 1.6448536269514722 * std::sqrt(p.variance());
  const double size = 1.0 - oracle::beta_cdf(cut, p.alpha(), p.beta());
  const CalibrationReport r = calibrate({.n = n, .k = k, .replicates = m, .seed = 4});
  const double se = std::sqrt(size * (1 - size) / static_cast<double>(m));
  EXPECT_NEAR(r.rejection_rate_at_05_wald, size, 3.0 * se);
  EXPECT_GT(size, 0.06);
}

TEST(Calibrate, SingleReplicate) {
  const CalibrationReport r = calibrate({.n = 10, .k = 2, .replicates = 1, .seed = 1});
  EXPECT_EQ(r.empirical_var, 0.0);
  EXPECT_GE(r.ks_distance, 0.0);
  EXPECT_LE(r.ks_distance, 1.0);
}

TEST(CalibrateProperties, NullSizeAtSeveralLevels) {
  const SimulationRun run = simulate_null({.n = 30, .k = 2, .replicates = 10000, .seed = 21});
  const std::vector<double> p = exact_p_values(run.effects, 30, 2);
  for (double q : {0.01, 0.05, 0.10}) {
    EXPECT_NEAR(rejection_rate(p, q), q, 3.0 * std::sqrt(q * (1 - q) / 10000.0)) << q;
  }
}

TEST(CalibrateProperties, PowerNondecreasingInSignal) {
  double prev = 0.0;
  for (double theta : {0.0, 0.2, 0.5, 1.0}) {
    const CalibrationReport r = calibrate(
        {.n = 50, .k = 3, .replicates = 10000, .seed = 17, .effect_strength = theta});
    EXPECT_GE(r.rejection_rate_at_05_exact, prev) << theta;
    prev = r.rejection_rate_at_05_exact;
  }
}

}  // namespace
}  // namespace pillai
