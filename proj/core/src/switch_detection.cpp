#include "t1track/switch_detection.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "t1track/binomial_tests.hpp"
#include "t1track/error.hpp"

namespace t1track {

namespace {

struct Interval {
  double start, end;
  std::vector<const EstimationRun*> train, test;
  double train_mean = 0.0;
  bool retained = false;
};

struct TestShots {
  std::vector<double> taus;
  std::size_t excited = 0;
};

TestShots collect(const Interval& iv) {
  TestShots s;
  for (const EstimationRun* r : iv.test) {
    for (const ProbeRecord& p : r->records) {
      s.taus.push_back(p.tau_s);
      s.excited += static_cast<std::size_t>(to_int(p.outcome));
    }
  }
  return s;
}

// P(S <= s) or P(S >= s) for the shot count under a common T1.
double tail(const TestShots& s, double t1, const SpamModel& spam, bool lower) {
  std::vector<double> p(s.taus.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = spam.beta() + spam.contrast() * std::exp(-s.taus[i] / t1);
  const std::vector<double> pmf = poisson_binomial_pmf(p);
  double acc = 0.0;
  if (lower) {
    for (std::size_t k = 0; k <= s.excited; ++k) acc += pmf[k];
  } else {
    for (std::size_t k = s.excited; k < pmf.size(); ++k) acc += pmf[k];
  }
  return acc;
}

}  // namespace

SwitchReport detect_switches(std::span<const EstimationRun> runs, const SwitchConfig& cfg) {
  if (!(cfg.interval_s > 0.0) || !(cfg.band_lo_s < cfg.band_hi_s) || !(cfg.level > 0.0 && cfg.level < 1.0)) {
    throw ConfigError("detect_switches: invalid configuration");
  }
  SwitchReport rep;
  std::vector<Interval> ivs;
  std::vector<const EstimationRun*> usable;
  for (const EstimationRun& r : runs) {
    if (!r.aborted && !r.records.empty()) usable.push_back(&r);
  }
  if (usable.empty()) {
    rep.mean_interevent_s = std::numeric_limits<double>::infinity();
    return rep;
  }

  // Greedy split at repetition boundaries.
  Interval cur{usable.front()->start_lab_time_s, 0.0, {}, {}};
  std::size_t in_cur = 0;
  for (const EstimationRun* r : usable) {
    (in_cur % 2 == 0 ? cur.train : cur.test).push_back(r);
    ++in_cur;
    cur.end = r->end_lab_time_s;
    if (cur.end - cur.start >= cfg.interval_s) {
      ivs.push_back(std::move(cur));
      cur = Interval{r->end_lab_time_s, r->end_lab_time_s, {}, {}};
      in_cur = 0;
    }
  }
  if (!cur.test.empty()) ivs.push_back(std::move(cur));

  rep.intervals = ivs.size();
  rep.duration_s = usable.back()->end_lab_time_s - usable.front()->start_lab_time_s;
  for (Interval& iv : ivs) {
    if (iv.test.empty()) continue;
    double s = 0.0;
    for (const EstimationRun* r : iv.train) s += r->final_posterior.t1_hat();
    iv.train_mean = s / static_cast<double>(iv.train.size());
    iv.retained = iv.train_mean > cfg.band_lo_s && iv.train_mean < cfg.band_hi_s;
    if (!iv.retained) ++rep.filtered;
  }

  const double alpha = 1.0 - cfg.level;
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    if (!ivs[i].retained) continue;
    if (prev) {
      const Interval& a = ivs[*prev];
      const Interval& b = ivs[i];
      ++rep.pairs;
      if (std::abs(b.train_mean - a.train_mean) > cfg.min_jump_s) {
        ++rep.candidates;
        const bool a_low = a.train_mean < b.train_mean;
        const Interval& lo_iv = a_low ? a : b;
        const Interval& hi_iv = a_low ? b : a;
        const double mid = 0.5 * (a.train_mean + b.train_mean);
        // Low-T1 interval: too few excited outcomes for T1 >= mid; high: too many for T1 <= mid.
        const bool low_ok = tail(collect(lo_iv), mid, cfg.spam, true) <= alpha;
        const bool high_ok = tail(collect(hi_iv), mid, cfg.spam, false) <= alpha;
        if (low_ok && high_ok) {
          ++rep.verified;
          rep.events.push_back({b.start, a.train_mean, b.train_mean});
        }
      }
    }
    prev = i;
  }

  rep.filtered_fraction = rep.intervals ? static_cast<double>(rep.filtered) / static_cast<double>(rep.intervals) : 0.0;
  rep.verified_fraction = rep.candidates ? static_cast<double>(rep.verified) / static_cast<double>(rep.candidates) : 0.0;
  if (rep.duration_s > 0.0) {
    rep.event_rate_hz = static_cast<double>(rep.verified) / rep.duration_s;
    rep.false_positive_bound_hz = alpha * alpha * static_cast<double>(rep.pairs) / rep.duration_s;
  }
  rep.mean_interevent_s = rep.verified ? rep.duration_s / static_cast<double>(rep.verified)
                                       : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace t1track
