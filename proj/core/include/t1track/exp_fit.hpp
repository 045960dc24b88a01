#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "t1track/estimator.hpp"

namespace t1track {

/// Linear sweep tau_i = i * tau0, i = 1..n_points, with M shots per point.
struct SweepConfig {
  enum class Order { kSequential, kInterleaved };

  double tau0_s = 12e-6;
  std::size_t n_points = 50;
  std::size_t reps_per_point = 10;
  Order order = Order::kInterleaved;

  /// Throws ConfigError unless tau0 > 0 and n_points >= 3.
  void validate() const;
  double tau(std::size_t i) const noexcept { return static_cast<double>(i + 1) * tau0_s; }
};

/// Excited-state counts per sweep point.
struct SweepData {
  std::vector<double> taus_s;
  std::vector<std::uint64_t> excited;
  std::vector<std::uint64_t> shots;
};

/// Result of fitting offset + amplitude * exp(-Gamma1 tau).
struct ExpFitResult {
  double gamma1_per_s = 0.0;
  double gamma1_std = 0.0;
  double t1_s = 0.0;
  double t1_std_s = 0.0;
  double offset = 0.0;
  double offset_std = 0.0;
  double amplitude = 0.0;
  double amplitude_std = 0.0;
  double alpha = 0.0;  // 1 - offset - amplitude
  double beta = 0.0;   // offset
  double residual_norm = 0.0;  // weighted
  int iterations = 0;
};

/// Weighted fit with binomial standard errors per point.
/// Throws InsufficientData (fewer than 3 populated points) or FitDiverged.
ExpFitResult fit_fractions(const SweepData& data);

/// Fit to exact probabilities with unit weights (noiseless round trip).
ExpFitResult fit_curve(std::span<const double> taus_s, std::span<const double> fractions);

SweepData collect_sweep(MeasurementSource& source, const SweepConfig& cfg);

ExpFitResult sweep_and_fit(MeasurementSource& source, const SweepConfig& cfg);

}  // namespace t1track
