#include <cmath>

#include <gtest/gtest.h>

#include "t1track/qubit_simulator.hpp"
#include "t1track/switch_detection.hpp"

using namespace t1track;

namespace {

std::vector<EstimationRun> simulate(const RateProcessSpec& spec, double duration_s, std::uint64_t seed) {
  const SpamModel spam{0.11, 0.14};
  SimulatedQubit q(spec, spam, 23.2e-6, seed);
  EstimationConfig cfg;
  cfg.prior = GammaPosterior(3.0, 450e-6);
  cfg.spam = spam;
  cfg.policy = AdaptivePolicy(0.51);
  cfg.stop.max_shots = 50;
  cfg.keep_history = true;
  std::vector<EstimationRun> runs;
  while (q.lab_time() < duration_s) runs.push_back(run_estimation(q, cfg, runs.size()));
  return runs;
}

}  // namespace

TEST(SwitchDetection, StaticQubitHasRareEvents) {
  const auto runs = simulate({1.0 / 200e-6, {}, std::nullopt}, 40.0, 1);
  const SwitchReport r = detect_switches(runs);
  EXPECT_GT(r.intervals, 150u);
  EXPECT_LT(r.filtered_fraction, 0.05);
  EXPECT_LE(r.verified, 1u);
  EXPECT_GT(r.false_positive_bound_hz, 0.0);
  EXPECT_NEAR(r.false_positive_bound_hz, 0.025 * 0.025 * r.pairs / r.duration_s, 1e-12);
}

TEST(SwitchDetection, FindsTelegraphSwitches) {
  // 150 us <-> 350 us with 1 s mean dwell in each state.
  const double g_hi = 1.0 / 150e-6, g_lo = 1.0 / 350e-6;
  const RateProcessSpec spec{g_lo, {{1.0, 1.0, g_hi - g_lo, false}}, std::nullopt};
  const auto runs = simulate(spec, 60.0, 2);
  const SwitchReport r = detect_switches(runs);
  EXPECT_GT(r.candidates, 10u);
  EXPECT_GT(r.verified_fraction, 0.5);
  EXPECT_GT(r.event_rate_hz, 0.2);
  EXPECT_LT(r.event_rate_hz, 1.5);
  EXPECT_GT(r.event_rate_hz, 20.0 * r.false_positive_bound_hz);
  for (const DetectedSwitch& e : r.events) EXPECT_GT(std::abs(e.t1_after_s - e.t1_before_s), 100e-6);
}

TEST(SwitchDetection, EmptyInput) {
  const SwitchReport r = detect_switches({});
  EXPECT_EQ(r.intervals, 0u);
  EXPECT_EQ(r.verified, 0u);
  EXPECT_TRUE(std::isinf(r.mean_interevent_s));
}
