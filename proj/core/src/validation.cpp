#include "t1track/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "t1track/error.hpp"

namespace t1track {

ValidationReport run_validation_protocol(MeasurementSource& source, const ValidationConfig& cfg) {
  if (!std::is_sorted(cfg.strata_edges_s.begin(), cfg.strata_edges_s.end())) {
    throw ConfigError("validation: strata edges must be sorted");
  }
  ValidationReport report;
  for (std::size_t i = 0; i + 1 < cfg.strata_edges_s.size(); ++i) {
    report.strata.push_back({cfg.strata_edges_s[i], cfg.strata_edges_s[i + 1]});
  }
  if (cfg.n_test == 0) return report;

  const SpamModel& spam = cfg.adaptive.spam;
  const Thresholds th_greater = weak_strong_thresholds({cfg.n_test, -cfg.margin, cfg.level}, spam);
  const Thresholds th_less = weak_strong_thresholds({cfg.n_test, cfg.margin, cfg.level}, spam);

  EstimationConfig ec = cfg.adaptive;
  ec.keep_history = false;
  for (std::size_t r = 0; r < cfg.repetitions; ++r) {
    const EstimationRun run = run_estimation(source, ec, r);
    if (run.aborted) {
      ++report.aborted;
      continue;
    }
    const double t1_hat = run.final_posterior.t1_hat();
    std::size_t excited = 0;
    for (std::size_t i = 0; i < cfg.n_test; ++i) excited += to_int(source.measure(t1_hat).outcome);
    report.reps.push_back({t1_hat, excited, static_cast<double>(excited) / static_cast<double>(cfg.n_test),
                           test_greater(excited, th_greater), test_less(excited, th_less)});
  }

  auto frac = [](std::size_t a, std::size_t n) { return n ? static_cast<double>(a) / static_cast<double>(n) : 0.0; };
  std::size_t wg = 0, sg = 0, wl = 0, sl = 0;
  for (const ValidationRep& v : report.reps) {
    wg += v.greater.weak;
    sg += v.greater.strong;
    wl += v.less.weak;
    sl += v.less.strong;
  }
  const std::size_t n = report.reps.size();
  report.weak_greater_rate = frac(wg, n);
  report.strong_greater_rate = frac(sg, n);
  report.weak_less_rate = frac(wl, n);
  report.strong_less_rate = frac(sl, n);

  for (ValidationStratum& s : report.strata) {
    std::size_t a = 0, b = 0, c = 0, d = 0;
    double m = 0.0;
    for (const ValidationRep& v : report.reps) {
      if (v.t1_hat_s < s.lo_s || v.t1_hat_s >= s.hi_s) continue;
      ++s.count;
      a += v.greater.weak;
      b += v.greater.strong;
      c += v.less.weak;
      d += v.less.strong;
      m += v.mean_outcome;
    }
    s.weak_greater = frac(a, s.count);
    s.strong_greater = frac(b, s.count);
    s.weak_less = frac(c, s.count);
    s.strong_less = frac(d, s.count);
    s.mean_outcome = s.count ? m / static_cast<double>(s.count) : 0.0;
  }
  return report;
}

FrequentistSummary frequentist_study(MeasurementSource& source, const EstimationConfig& cfg,
                                     std::size_t runs, std::size_t groups) {
  if (groups == 0) throw ConfigError("frequentist_study: need at least one group");
  FrequentistSummary out;
  EstimationConfig ec = cfg;
  ec.keep_history = false;
  for (std::size_t r = 0; r < runs; ++r) {
    const EstimationRun run = run_estimation(source, ec, r);
    if (run.aborted || run.elapsed_s() <= 0.0) continue;
    const auto [lo, hi] = credible_interval(run.final_posterior, 0.68);
    const double t1 = run.final_posterior.t1_hat();
    out.runs.push_back({run.elapsed_s(), t1, hi - lo, frequentist_limit(t1, run.elapsed_s())});
  }
  if (out.runs.empty()) return out;

  double ratio = 0.0;
  for (const FrequentistRun& f : out.runs) ratio += f.ci68_width_s / f.limit_s;
  out.mean_ratio = ratio / static_cast<double>(out.runs.size());

  std::vector<FrequentistRun> sorted = out.runs;
  std::sort(sorted.begin(), sorted.end(),
            [](const FrequentistRun& a, const FrequentistRun& b) { return a.elapsed_s < b.elapsed_s; });
  auto scaled = [](const FrequentistRun& f) {
    return f.ci68_width_s * std::sqrt(f.elapsed_s) / (f.t1_hat_s * std::sqrt(f.t1_hat_s));
  };
  double total = 0.0;
  for (const FrequentistRun& f : sorted) total += scaled(f);
  out.overall_mean = total / static_cast<double>(sorted.size());
  const std::size_t g = std::min(groups, sorted.size());
  for (std::size_t i = 0; i < g; ++i) {
    const std::size_t b = i * sorted.size() / g;
    const std::size_t e = (i + 1) * sorted.size() / g;
    double s = 0.0;
    for (std::size_t j = b; j < e; ++j) s += scaled(sorted[j]);
    out.group_means.push_back(s / static_cast<double>(e - b));
  }
  return out;
}

}  // namespace t1track
