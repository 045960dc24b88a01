#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "t1track/gamma_posterior.hpp"

namespace t1track {

/// tau_{i+1} = c * T1_hat, clamped to [tau_min, tau_max].
class AdaptivePolicy {
 public:
  static constexpr double kMaxPrefactor = 1.59;

  /// Throws ConfigError unless 0 < c <= 1.59 and 0 < tau_min < tau_max.
  explicit AdaptivePolicy(double c, double tau_min_s = 1e-6, double tau_max_s = 5e-3);

  double c() const noexcept { return c_; }
  double tau_min() const noexcept { return tau_min_; }
  double tau_max() const noexcept { return tau_max_; }

 private:
  double c_;
  double tau_min_;
  double tau_max_;
};

double next_tau(const GammaPosterior& posterior, const AdaptivePolicy& policy);

/// One probing cycle.
struct ProbeRecord {
  std::size_t rep_index = 0;
  std::size_t shot_index = 0;
  double lab_time_s = 0.0;  // at shot start
  double tau_s = 0.0;
  Outcome outcome = Outcome::kGround;
};

/// Anything that answers "wait tau, then read out" single-shot queries.
class MeasurementSource {
 public:
  struct Shot {
    Outcome outcome;
    double lab_time_s;  // lab time at which the shot started
  };

  virtual ~MeasurementSource() = default;
  /// Performs one probe with waiting time tau; advances lab time by tau plus any overhead.
  virtual Shot measure(double tau_s) = 0;
  virtual double lab_time() const = 0;
};

/// Streaming estimator: holds nothing but the current belief and fixed settings.
class AdaptiveEstimator {
 public:
  AdaptiveEstimator(GammaPosterior prior, SpamModel spam, AdaptivePolicy policy)
      : prior_(prior), posterior_(prior), spam_(spam), policy_(policy) {}

  double next_tau() const { return t1track::next_tau(posterior_, policy_); }
  /// Throws ZeroEvidence (belief left unchanged).
  void observe(Outcome m, double tau_s) { posterior_ = update(posterior_, m, tau_s, spam_); }
  void reset() noexcept { posterior_ = prior_; }

  const GammaPosterior& posterior() const noexcept { return posterior_; }
  const GammaPosterior& prior() const noexcept { return prior_; }
  const SpamModel& spam() const noexcept { return spam_; }
  const AdaptivePolicy& policy() const noexcept { return policy_; }

 private:
  GammaPosterior prior_;
  GammaPosterior posterior_;
  SpamModel spam_;
  AdaptivePolicy policy_;
};

/// Alternative termination rules; the run ends at the first one reached.
struct StopRule {
  std::size_t max_shots = 50;
  std::optional<double> time_budget_s;     // elapsed lab time since the repetition start
  std::optional<double> target_t1_std_s;   // stop once theta k^-3/2 falls below this
};

struct EstimationConfig {
  GammaPosterior prior{3.0, 450e-6};
  SpamModel spam{};
  AdaptivePolicy policy{0.51};
  StopRule stop{};
  bool keep_history = true;  // store per-shot records and posteriors
};

/// Result of a single repetition.
struct EstimationRun {
  std::size_t rep_index = 0;
  double start_lab_time_s = 0.0;
  double end_lab_time_s = 0.0;
  GammaPosterior final_posterior{3.0, 450e-6};
  std::size_t shots = 0;
  double sum_tau_s = 0.0;
  std::vector<GammaPosterior> posterior_trace;  // posterior after each shot
  std::vector<ProbeRecord> records;
  bool aborted = false;
  std::string abort_reason;

  double elapsed_s() const noexcept { return end_lab_time_s - start_lab_time_s; }
};

/// Runs one repetition from the configured prior against `source`.
/// A ZeroEvidence during the run aborts the repetition and is flagged, not thrown.
EstimationRun run_estimation(MeasurementSource& source, const EstimationConfig& config,
                             std::size_t rep_index = 0);

/// Runs `repetitions` statistically independent repetitions back to back; the prior is reset each time.
std::vector<EstimationRun> run_repetitions(MeasurementSource& source, const EstimationConfig& config,
                                           std::size_t repetitions);

}  // namespace t1track
