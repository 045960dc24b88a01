#include "t1track/estimator.hpp"

#include <algorithm>

#include "t1track/error.hpp"

namespace t1track {

AdaptivePolicy::AdaptivePolicy(double c, double tau_min_s, double tau_max_s)
    : c_(c), tau_min_(tau_min_s), tau_max_(tau_max_s) {
  if (!(c > 0.0 && c <= kMaxPrefactor)) throw ConfigError("AdaptivePolicy: need 0 < c <= 1.59");
  if (!(tau_min_s > 0.0 && tau_min_s < tau_max_s)) {
    throw ConfigError("AdaptivePolicy: need 0 < tau_min < tau_max");
  }
}

double next_tau(const GammaPosterior& posterior, const AdaptivePolicy& policy) {
  return std::clamp(policy.c() * posterior.t1_hat(), policy.tau_min(), policy.tau_max());
}

EstimationRun run_estimation(MeasurementSource& source, const EstimationConfig& config,
                             std::size_t rep_index) {
  EstimationRun run;
  run.rep_index = rep_index;
  run.start_lab_time_s = source.lab_time();
  run.final_posterior = config.prior;
  if (config.keep_history) {
    run.posterior_trace.reserve(config.stop.max_shots);
    run.records.reserve(config.stop.max_shots);
  }

  AdaptiveEstimator estimator(config.prior, config.spam, config.policy);
  for (std::size_t i = 0; i < config.stop.max_shots; ++i) {
    if (config.stop.time_budget_s && source.lab_time() - run.start_lab_time_s >= *config.stop.time_budget_s) {
      break;
    }
    if (config.stop.target_t1_std_s && i > 0 &&
        estimator.posterior().t1_std() <= *config.stop.target_t1_std_s) {
      break;
    }
    const double tau = estimator.next_tau();
    const MeasurementSource::Shot shot = source.measure(tau);
    try {
      estimator.observe(shot.outcome, tau);
    } catch (const ZeroEvidence& e) {
      run.aborted = true;
      run.abort_reason = e.what();
      break;
    }
    ++run.shots;
    run.sum_tau_s += tau;
    if (config.keep_history) {
      run.records.push_back({rep_index, i, shot.lab_time_s, tau, shot.outcome});
      run.posterior_trace.push_back(estimator.posterior());
    }
  }
  run.final_posterior = estimator.posterior();
  run.end_lab_time_s = source.lab_time();
  return run;
}

std::vector<EstimationRun> run_repetitions(MeasurementSource& source, const EstimationConfig& config,
                                           std::size_t repetitions) {
  std::vector<EstimationRun> runs;
  runs.reserve(repetitions);
  for (std::size_t r = 0; r < repetitions; ++r) runs.push_back(run_estimation(source, config, r));
  return runs;
}

}  // namespace t1track
