#include <cmath>

#include <gtest/gtest.h>

#include "t1track/baselines.hpp"
#include "t1track/error.hpp"
#include "t1track/exp_fit.hpp"
#include "t1track/qubit_simulator.hpp"

using namespace t1track;

namespace {
constexpr double kUs = 1e-6;
RateProcessSpec static_t1(double t1) { return {1.0 / t1, {}, std::nullopt}; }
}  // namespace

TEST(ExpFit, NoiselessRecovery) {
  const double g = 1.0 / (140 * kUs), alpha = 0.11, beta = 0.14;
  std::vector<double> t, y;
  for (int i = 1; i <= 40; ++i) {
    t.push_back(i * 15 * kUs);
    y.push_back(beta + (1 - alpha - beta) * std::exp(-g * t.back()));
  }
  const ExpFitResult r = fit_curve(t, y);
  EXPECT_NEAR(r.gamma1_per_s, g, 1e-9 * g);
  EXPECT_NEAR(r.beta, beta, 1e-9);
  EXPECT_NEAR(r.alpha, alpha, 1e-9);
  EXPECT_LT(r.residual_norm, 1e-10);
}

TEST(ExpFit, InsufficientAndInvalid) {
  SweepData d{{1e-5, 2e-5}, {1, 1}, {2, 2}};
  EXPECT_THROW(fit_fractions(d), InsufficientData);
  SweepConfig bad;
  bad.n_points = 2;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(ExpFit, ConsistencyAsShotsGrow) {
  const double t1 = 150 * kUs;
  double prev = INFINITY;
  for (std::size_t m : {100u, 1000u, 10000u}) {
    double err = 0.0;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      SimulatedQubit q(static_t1(t1), SpamModel(0.1, 0.1), 0.0, 1000 + seed + m);
      SweepConfig cfg{20 * kUs, 30, m, SweepConfig::Order::kInterleaved};
      err += std::abs(sweep_and_fit(q, cfg).t1_s - t1) / t1;
    }
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(ExpFit, SweepOf1890ShotsAtT1Of165) {
  // 63 points over 15..945 us, 30 shots each.
  int within = 0;
  double sum_std = 0.0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    SimulatedQubit q(static_t1(165 * kUs), SpamModel(0.11, 0.14), 0.0, seed);
    const ExpFitResult r = sweep_and_fit(q, {15 * kUs, 63, 30, SweepConfig::Order::kSequential});
    within += std::abs(r.t1_s - 165 * kUs) <= 2.0 * r.t1_std_s;
    sum_std += r.t1_std_s;
  }
  EXPECT_GE(within, 34);
  EXPECT_NEAR(sum_std / 40 / kUs, 15.0, 8.0);
}

TEST(MapFixedTau, ConjugateModeWithoutSpam) {
  const GammaPosterior prior(3.0, 450 * kUs);
  const MapEstimate m = map_fixed_tau(40, 40, 100 * kUs, prior, SpamModel{});
  EXPECT_NEAR(m.gamma1_per_s, 2.0 / (450 * kUs + 40 * 100 * kUs), 1e-7 * m.gamma1_per_s);
}

TEST(MapFixedTau, FlatPriorApproachesMaximumLikelihood) {
  const SpamModel spam(0.05, 0.05);
  const double tau = 100 * kUs;
  const std::uint64_t n = 5000, k = 2100;
  // ML: p = k/n inverted through the likelihood.
  const double p = static_cast<double>(k) / n;
  const double ml = -std::log((p - 0.05) / 0.9) / tau;
  const MapEstimate m = map_fixed_tau(n, k, tau, GammaPosterior(1.0, 1e-12), spam);
  EXPECT_NEAR(m.gamma1_per_s, ml, 1e-6 * ml);
  EXPECT_THROW(map_fixed_tau(0, 0, tau, GammaPosterior(3, 1e-4), spam), InsufficientData);
}

TEST(CompareStudy, RowsAndSmallSanity) {
  CompareConfig cfg;
  cfg.t1_grid_s = {150 * kUs, 400 * kUs};
  cfg.trials = 60;
  cfg.n_shots = 100;
  cfg.estimators = {EstimatorSpec::adaptive(1.0), EstimatorSpec::fixed_tau(100 * kUs)};
  const auto rows = compare_study(cfg);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].estimator, "adaptive");
  EXPECT_EQ(rows[1].estimator, "fixed_100us");
  for (const CompareRow& r : rows) {
    EXPECT_GT(r.mare, 0.0);
    EXPECT_LT(r.mare, 1.0);
    EXPECT_GE(r.msre, r.mare * r.mare);
  }
  EXPECT_EQ(compare_study(cfg)[2].mare, rows[2].mare);
  cfg.t1_grid_s.clear();
  EXPECT_THROW(compare_study(cfg), ConfigError);
}

TEST(Interleaved, SmallRunAgreesAndCountsShots) {
  SimulatedQubit q(static_t1(136 * kUs), SpamModel(0.11, 0.14), 23.2 * kUs, 8);
  EstimationConfig ec;
  ec.spam = SpamModel(0.11, 0.14);
  ec.policy = AdaptivePolicy(0.98);
  const SweepConfig sweep{12 * kUs, 50, 1, SweepConfig::Order::kInterleaved};
  const InterleavedReport r = run_interleaved(q, ec, sweep, 200);
  EXPECT_EQ(r.adaptive_t1_s.size(), 200u);
  for (std::uint64_t s : r.sweep.shots) EXPECT_EQ(s, 200u);
  ASSERT_TRUE(r.fit_ok);
  EXPECT_NEAR(r.fit.t1_s, 136 * kUs, 4.0 * r.fit.t1_std_s);

  SimulatedQubit q0(static_t1(136 * kUs), SpamModel(0.11, 0.14), 23.2 * kUs, 8);
  const InterleavedReport none = run_interleaved(q0, ec, sweep, 0);
  EXPECT_TRUE(none.adaptive_t1_s.empty());
  EXPECT_FALSE(none.fit_ok);
}
