#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "t1track/estimator.hpp"
#include "t1track/exp_fit.hpp"
#include "t1track/gamma_posterior.hpp"

namespace t1track {

struct MapEstimate {
  double gamma1_per_s;
  double t1_s;
};

/// Maximum a posteriori rate from n shots at one fixed tau, of which n_excited read 1.
/// Grid search over log rate followed by Brent refinement; the prior keeps it finite.
MapEstimate map_fixed_tau(std::uint64_t n_shots, std::uint64_t n_excited, double tau_s,
                          const GammaPosterior& prior, const SpamModel& spam);

struct EstimatorSpec {
  enum class Kind { kAdaptive, kFixedTau };
  Kind kind = Kind::kAdaptive;
  double value = 1.0;  // c for adaptive, tau (s) for fixed
  std::string name;

  static EstimatorSpec adaptive(double c);
  static EstimatorSpec fixed_tau(double tau_s);
};

struct CompareConfig {
  std::vector<double> t1_grid_s;
  std::size_t trials = 2000;
  std::size_t n_shots = 100;
  SpamModel spam_sim{0.12, 0.12};
  SpamModel spam_est{0.12, 0.12};
  GammaPosterior prior{3.0, 450e-6};
  std::vector<EstimatorSpec> estimators;
  std::uint64_t seed = 1;
};

struct CompareRow {
  double true_t1_s;
  std::string estimator;
  double mare;  // <|T1 - T1_hat| / T1>
  double msre;  // <((T1 - T1_hat) / T1)^2>
  double bias;  // <T1_hat / T1> - 1
};

/// Static-source comparison with zero idle time. Trial j of grid point i uses the same
/// simulator seed for every estimator.
std::vector<CompareRow> compare_study(const CompareConfig& cfg);

struct SpamSweepRow {
  double spam_est;  // alpha_est = beta_est
  double true_t1_s;
  double mare;
  double msre;
  double bias;
};

/// Adaptive estimator (c from the first estimator spec, default 1) with assumed
/// alpha = beta = each level while the simulator keeps cfg.spam_sim.
std::vector<SpamSweepRow> spam_sweep(const CompareConfig& cfg, std::span<const double> est_levels);

/// Source wrapper that follows every probe with one nonadaptive sweep shot.
class InterleavedSweepSource final : public MeasurementSource {
 public:
  InterleavedSweepSource(MeasurementSource& inner, const SweepConfig& sweep);

  Shot measure(double tau_s) override;
  double lab_time() const override { return inner_.lab_time(); }

  /// Restarts the sweep at point 0 (call once per repetition).
  void restart() noexcept { next_ = 0; }
  const SweepData& data() const noexcept { return data_; }

 private:
  MeasurementSource& inner_;
  SweepConfig sweep_;
  SweepData data_;
  std::size_t next_ = 0;
};

struct InterleavedReport {
  std::size_t repetitions = 0;
  std::size_t aborted = 0;
  double adaptive_mean_t1_s = 0.0;
  double adaptive_se_s = 0.0;  // standard error of the mean over repetitions
  ExpFitResult fit;
  bool fit_ok = false;
  double z = 0.0;  // (adaptive - fit) / joint sigma
  bool agree = false;  // |z| <= 2
  std::vector<double> adaptive_t1_s;
  SweepData sweep;
};

/// Adaptive repetitions with one sweep shot after each adaptive shot; the sweep restarts
/// every repetition and accumulates across repetitions for a single fit.
InterleavedReport run_interleaved(MeasurementSource& source, const EstimationConfig& adaptive,
                                  const SweepConfig& sweep, std::size_t repetitions);

}  // namespace t1track
