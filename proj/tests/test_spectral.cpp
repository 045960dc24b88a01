#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "t1track/error.hpp"
#include "t1track/spectral.hpp"
#include "t1track/trace_tools.hpp"

using namespace t1track;

namespace {

UniformTrace white_trace(std::size_t n, double sigma, double dt, std::uint64_t seed) {
  CounterRng r = CounterRng::stream(seed, 0);
  UniformTrace t;
  t.dt_s = dt;
  t.values.resize(n);
  for (double& v : t.values) v = 150e-6 + sigma * r.normal();
  return t;
}

double slope(const std::vector<AllanPoint>& a, std::size_t i, std::size_t j) {
  return std::log(a[j].adev / a[i].adev) / std::log(a[j].tau_s / a[i].tau_s);
}

}  // namespace

TEST(Welch, WhiteNoiseLevelAndParseval) {
  const double sigma = 20e-6, dt = 5e-3;
  const UniformTrace t = white_trace(1 << 16, sigma, dt, 1);
  const Psd psd = welch_psd(t);
  double mean = 0.0, area = 0.0;
  for (std::size_t k = 1; k < psd.values.size(); ++k) mean += psd.values[k];
  mean /= static_cast<double>(psd.values.size() - 1);
  const double df = psd.freqs_hz[1];
  for (double v : psd.values) area += v * df;
  EXPECT_NEAR(mean, 2.0 * sigma * sigma * dt, 0.1 * 2.0 * sigma * sigma * dt);
  EXPECT_NEAR(area, sigma * sigma, 0.05 * sigma * sigma);
  EXPECT_NEAR(psd.freqs_hz.back(), 0.5 / dt, 1e-9);
}

TEST(Welch, Errors) {
  UniformTrace t;
  t.values.assign(10, 1.0);
  EXPECT_THROW(welch_psd(t), TraceTooShort);
  t.values.assign(64, 1.0);
  EXPECT_THROW(welch_psd(t, {128, 0.5}), TraceTooShort);
  EXPECT_THROW(welch_psd(t, {16, 1.0}), ConfigError);
}

TEST(Allan, ConstantIsZero) {
  UniformTrace t;
  t.dt_s = 0.1;
  t.values.assign(300, 123e-6);
  for (const AllanPoint& p : allan_deviation(t, allan_taus(t))) EXPECT_EQ(p.adev, 0.0);
}

TEST(Allan, WhiteNoiseFollowsInverseSqrt) {
  const double sigma = 30e-6, dt = 1e-2;
  const UniformTrace t = white_trace(200000, sigma, dt, 2);
  const double a_w = sigma * sigma * dt;  // two-sided level
  std::vector<double> taus;
  for (int m : {1, 2, 5, 10}) taus.push_back(m * dt);
  const auto a = allan_deviation(t, taus);
  for (const AllanPoint& p : a) EXPECT_NEAR(p.adev, std::sqrt(a_w / p.tau_s), 0.1 * std::sqrt(a_w / p.tau_s));
  EXPECT_NEAR(slope(a, 0, 3), -0.5, 0.05);
  EXPECT_EQ(a[0].n_samples, 200000u - 1u);
}

TEST(Allan, FlickerPlateau) {
  const double amp = 4e-10, dt = 1e-2;
  CounterRng r = CounterRng::stream(3, 0);
  UniformTrace t;
  t.dt_s = dt;
  t.values = synthesize_from_psd([&](double f) { return amp / f; }, 1 << 19, dt, r);
  std::vector<double> taus;
  for (int m : {8, 32, 128, 512}) taus.push_back(m * dt);
  const auto a = allan_deviation(t, taus);
  const double plateau = std::sqrt(2.0 * amp * std::log(2.0));
  for (const AllanPoint& p : a) EXPECT_NEAR(p.adev, plateau, 0.15 * plateau) << p.tau_s;
  EXPECT_NEAR(slope(a, 0, 3), 0.0, 0.05);
}

TEST(Allan, Validation) {
  UniformTrace t;
  t.dt_s = 0.1;
  t.values.assign(30, 0.0);
  const double off_grid[] = {0.15};
  EXPECT_THROW(allan_deviation(t, off_grid), ConfigError);
  const double too_long[] = {1.1};
  EXPECT_THROW(allan_deviation(t, too_long), TraceTooShort);
}

TEST(Synthesis, WhiteVarianceFromPsd) {
  CounterRng r(4);
  const double dt = 1e-3, level = 2e-12;
  const auto x = synthesize_from_psd([&](double) { return level; }, 1 << 16, dt, r);
  double m = std::accumulate(x.begin(), x.end(), 0.0) / x.size(), v = 0.0;
  for (double s : x) v += (s - m) * (s - m);
  v /= x.size();
  EXPECT_NEAR(v, level / (2.0 * dt), 0.03 * level / (2.0 * dt));
}

TEST(Resample, NearestSampleOntoMeanPeriod) {
  const double t[] = {0.0, 1.1, 1.9, 3.05, 4.0};
  const double v[] = {1, 2, 3, 4, 5};
  const double s[] = {.1, .2, .3, .4, .5};
  const UniformTrace u = resample_uniform(t, v, s);
  EXPECT_DOUBLE_EQ(u.dt_s, 1.0);
  EXPECT_EQ(u.values, (std::vector<double>{1, 2, 3, 4, 5}));
  EXPECT_EQ(u.stds.size(), 5u);
  const double t2[] = {0.0, 0.1, 0.2, 3.0};
  const double v2[] = {1, 2, 3, 4};
  EXPECT_EQ(resample_uniform(t2, v2).values, (std::vector<double>{1, 3, 4, 4}));
  EXPECT_THROW(resample_uniform(std::span<const double>(t, 1), std::span<const double>(v, 1)), TraceTooShort);
}

TEST(MovingBand, ConstantAndUnitWindow) {
  UniformTrace t;
  t.values = {5, 5, 5, 5, 5, 5};
  t.stds = {1, 1, 1, 1, 1, 1};
  const MovingBand b = moving_mean_band(t, 4);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_DOUBLE_EQ(b.mean[i], 5.0);
    EXPECT_DOUBLE_EQ(b.hi[i], 5.5);
  }
  t.values = {1, 7, 2, 9};
  t.stds = {0.5, 0.1, 0.2, 0.3};
  const MovingBand u = moving_mean_band(t, 1);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(u.mean[i], t.values[i]);
    EXPECT_DOUBLE_EQ(u.lo[i], t.values[i] - t.stds[i]);
  }
  EXPECT_THROW(moving_mean_band(t, 0), ConfigError);
}
