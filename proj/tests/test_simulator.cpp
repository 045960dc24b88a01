#include <cmath>

#include <gtest/gtest.h>

#include "t1track/error.hpp"
#include "t1track/presets.hpp"
#include "t1track/qubit_simulator.hpp"
#include "t1track/rate_process.hpp"

using namespace t1track;

namespace {
constexpr double kUs = 1e-6;
}

TEST(RateProcess, NoFluctuatorsIsStatic) {
  RateProcess p({5000.0, {}, std::nullopt}, CounterRng(1));
  EXPECT_DOUBLE_EQ(p.evolve(1.0), 5000.0);
  EXPECT_DOUBLE_EQ(p.time(), 1.0);
}

TEST(RateProcess, PinnedOnFluctuator) {
  RateProcessSpec spec{1000.0, {{5.0, 0.0, 250.0, true}}, std::nullopt};
  RateProcess p(spec, CounterRng(2), false);
  EXPECT_DOUBLE_EQ(p.evolve(10.0), 1250.0);
}

TEST(RateProcess, ExactPiecewiseAverage) {
  RateProcessSpec spec{100.0, {{40.0, 60.0, 10.0, false}, {3.0, 1.0, 7.0, true}}, std::nullopt};
  RateProcess p(spec, CounterRng(3), false);
  std::vector<SwitchEvent> ev;
  const double avg = p.evolve(2.0, &ev);
  // Rebuild the integral from the event list.
  double g = 107.0, t = 0.0, integral = 0.0;
  for (const SwitchEvent& e : ev) {
    integral += g * (e.time_s - t);
    t = e.time_s;
    g = e.gamma_after;
  }
  integral += g * (2.0 - t);
  EXPECT_GT(ev.size(), 10u);
  EXPECT_NEAR(avg, integral / 2.0, 1e-12 * avg);
}

TEST(RateProcess, StationaryOnFraction) {
  for (auto [up, down] : {std::pair{5.0, 5.0}, std::pair{2.0, 8.0}}) {
    RateProcessSpec spec{0.0 + 1.0, {{up, down, 1.0, false}}, std::nullopt};
    RateProcess p(spec, CounterRng::stream(4, static_cast<std::uint64_t>(up)));
    const double duration = 4000.0;
    const double frac = p.evolve(duration) - 1.0;
    const double pi = up / (up + down);
    // Correlation time 1/(up+down): effective sample count duration*(up+down)/2.
    const double sd = std::sqrt(pi * (1 - pi) * 2.0 / (duration * (up + down)));
    EXPECT_NEAR(frac, pi, 3.0 * sd);
  }
}

TEST(RateProcess, Reproducible) {
  RateProcessSpec spec{100.0, {{1.0, 1.0, 10.0, false}}, EnsembleSpec{10, 0.1, 10.0, 2.0}};
  RateProcess a(spec, CounterRng(9)), b(spec, CounterRng(9));
  std::vector<SwitchEvent> ea, eb;
  a.evolve(50.0, &ea);
  b.evolve(50.0, &eb);
  ASSERT_EQ(ea.size(), eb.size());
  for (std::size_t i = 0; i < ea.size(); ++i) EXPECT_EQ(ea[i].time_s, eb[i].time_s);
  EXPECT_EQ(a.fluctuators().size(), 11u);
}

TEST(RateProcess, RejectsInvalid) {
  EXPECT_THROW(RateProcess({0.0, {}, std::nullopt}, CounterRng(1)), ConfigError);
  EXPECT_THROW(RateProcess({1.0, {{1.0, 1.0, -1.0, false}}, std::nullopt}, CounterRng(1)), ConfigError);
}

TEST(SimulatedQubit, ShotFrequencyMatchesSurvival) {
  const std::size_t n = 100000;
  for (const SpamModel& spam : {SpamModel{}, SpamModel(0.11, 0.14)}) {
    SimulatedQubit q({1.0 / (100 * kUs), {}, std::nullopt}, spam, 0.0, 77);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < n; ++i) ones += to_int(q.measure(100 * kUs).outcome);
    const double p = likelihood(Outcome::kExcited, 1.0 / (100 * kUs), 100 * kUs, spam);
    EXPECT_NEAR(static_cast<double>(ones) / n, p, 3.0 * std::sqrt(p * (1 - p) / n));
  }
  EXPECT_NEAR(std::exp(-1.0), 0.3679, 1e-4);
}

TEST(SimulatedQubit, ClockAdvancesByTauPlusIdle) {
  SimulatedQubit q({5000.0, {}, std::nullopt}, SpamModel{}, 23.2 * kUs, 1, true);
  const auto s0 = q.measure(50 * kUs);
  const auto s1 = q.measure(70 * kUs);
  EXPECT_EQ(s0.lab_time_s, 0.0);
  EXPECT_NEAR(s1.lab_time_s, 73.2 * kUs, 1e-15);
  EXPECT_NEAR(q.lab_time(), 166.4 * kUs, 1e-15);
  q.idle(1.0);
  EXPECT_NEAR(q.process().time(), q.lab_time(), 1e-12);
}

TEST(SimulatedQubit, TrajectoryRecordsSwitches) {
  const Preset p = make_preset("fig2_track");
  SimulatedQubit q(p.process, p.spam, p.idle_s, 3, true);
  q.idle(2.0);
  const auto& tr = q.trajectory();
  ASSERT_GT(tr.size(), 20u);
  for (const TrajectoryPoint& pt : tr) {
    const bool low = std::abs(pt.gamma1_per_s - 1.0 / (500 * kUs)) < 1e-6;
    const bool high = std::abs(pt.gamma1_per_s - 1.0 / (100 * kUs)) < 1e-6;
    EXPECT_TRUE(low || high);
  }
}

TEST(SimulatedQubit, QuasistaticWindowsLookExponential) {
  // Slow switching versus the probe scale: survival within a window follows one rate.
  RateProcessSpec spec{1.0 / (350 * kUs), {{1.0 / 0.05, 1.0 / 0.05, 1.0 / (100 * kUs) - 1.0 / (350 * kUs), false}},
                       std::nullopt};
  SimulatedQubit q(spec, SpamModel{}, 0.0, 12);
  for (int shot = 0; shot < 2000; ++shot) {
    q.measure(60 * kUs);
    const double g = q.last_mean_gamma();
    EXPECT_GE(g, 1.0 / (350 * kUs) - 1e-6);
    EXPECT_LE(g, 1.0 / (100 * kUs) + 1e-6);
  }
}

TEST(Presets, DocumentedValues) {
  const Preset f = make_preset("fig1f");
  EXPECT_EQ(f.spam, SpamModel(0.11, 0.14));
  EXPECT_EQ(f.prior, GammaPosterior(3.0, 450 * kUs));
  EXPECT_DOUBLE_EQ(f.c, 0.51);
  const Preset q2 = make_preset("q2");
  EXPECT_EQ(q2.prior, GammaPosterior(3.0, 550 * kUs));
  EXPECT_EQ(q2.spam, SpamModel(0.12, 0.13));
  const Preset f3 = make_preset("fig3_72h_scaled");
  EXPECT_EQ(f3.spam, SpamModel(0.12, 0.12));
  EXPECT_DOUBLE_EQ(f3.c, 0.53);
  EXPECT_EQ(f3.prior, GammaPosterior(3.0, 600 * kUs));
  EXPECT_EQ(make_preset("fig2_track").n_shots, 100u);
  for (const auto& n : preset_names()) EXPECT_NO_THROW(make_preset(n));
  EXPECT_THROW(make_preset("fig9"), UnknownPreset);
}
