#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "t1track/binomial_tests.hpp"
#include "t1track/estimator.hpp"

namespace t1track {

struct ValidationConfig {
  EstimationConfig adaptive;
  std::size_t n_test = 200;
  std::size_t repetitions = 100;
  double margin = 0.2;  // q
  double level = 0.95;
  std::vector<double> strata_edges_s{100e-6, 150e-6, 200e-6, 250e-6, 300e-6, 350e-6};
};

struct ValidationRep {
  double t1_hat_s;
  std::size_t excited;  // over the n_test validation shots
  double mean_outcome;
  TestOutcome greater;  // T1 > (1 - q) T1_hat
  TestOutcome less;     // T1 < (1 + q) T1_hat
};

struct ValidationStratum {
  double lo_s;
  double hi_s;
  std::size_t count = 0;
  double weak_greater = 0.0;  // pass fractions
  double strong_greater = 0.0;
  double weak_less = 0.0;
  double strong_less = 0.0;
  double mean_outcome = 0.0;
};

struct ValidationReport {
  std::vector<ValidationRep> reps;
  std::vector<ValidationStratum> strata;
  double weak_greater_rate = 0.0;
  double weak_less_rate = 0.0;
  double strong_greater_rate = 0.0;
  double strong_less_rate = 0.0;
  std::size_t aborted = 0;
};

/// Each repetition: one adaptive estimation, then n_test shots at tau = T1_hat.
ValidationReport run_validation_protocol(MeasurementSource& source, const ValidationConfig& cfg);

struct FrequentistRun {
  double elapsed_s;
  double t1_hat_s;
  double ci68_width_s;  // equal-tailed 68% credible interval width
  double limit_s;       // frequentist_limit(T1_hat, elapsed)
};

struct FrequentistSummary {
  std::vector<FrequentistRun> runs;
  double mean_ratio = 0.0;  // <ci68_width / limit>
  /// Mean of width * sqrt(T) / T1_hat^1.5 per elapsed-time quintile.
  std::vector<double> group_means;
  double overall_mean = 0.0;
};

/// Repeated adaptive runs against `source`, compared with the binomial limit.
FrequentistSummary frequentist_study(MeasurementSource& source, const EstimationConfig& cfg,
                                     std::size_t runs, std::size_t groups = 5);

}  // namespace t1track
