#include "t1track/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "t1track/error.hpp"
#include "t1track/numerics.hpp"
#include "t1track/qubit_simulator.hpp"
#include "t1track/rng.hpp"

namespace t1track {

MapEstimate map_fixed_tau(std::uint64_t n_shots, std::uint64_t n_excited, double tau_s,
                          const GammaPosterior& prior, const SpamModel& spam) {
  if (n_shots == 0) throw InsufficientData("map_fixed_tau: need at least one shot");
  if (n_excited > n_shots) throw ConfigError("map_fixed_tau: more excited counts than shots");
  if (!(tau_s > 0.0)) throw DomainError("map_fixed_tau: tau must be positive");
  const double n1 = static_cast<double>(n_excited);
  const double n0 = static_cast<double>(n_shots - n_excited);
  const double k = prior.k();
  const double theta = prior.theta();
  const double s = spam.contrast();

  // Negative log posterior density in rate, evaluated at lambda = e^u.
  auto nlp = [&](double u) {
    const double lam = std::exp(u);
    const double x = lam * tau_s;
    double v = -(k - 1.0) * u + theta * lam;
    if (n1 > 0.0) v -= n1 * std::log(spam.beta() + s * std::exp(-x));
    if (n0 > 0.0) v -= n0 * std::log(spam.alpha() + s * (-std::expm1(-x)));
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  const double ref = std::min(prior.mean_rate(), 1.0 / tau_s);
  const double ref_hi = std::max(prior.mean_rate(), 1.0 / tau_s);
  const double lo = std::log(ref * 1e-4);
  const double hi = std::log(ref_hi * 1e3);
  constexpr std::size_t kGrid = 300;
  std::size_t best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double u = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
    const double v = nlp(u);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double step = (hi - lo) / (kGrid - 1);
  const double ulo = lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
  const double uhi = lo + step * static_cast<double>(std::min(best + 1, kGrid - 1));
  const double u = minimize_bounded(nlp, ulo, uhi, 1e-12).x;
  const double lam = std::exp(u);
  return {lam, 1.0 / lam};
}

EstimatorSpec EstimatorSpec::adaptive(double c) {
  return {Kind::kAdaptive, c, "adaptive"};
}

EstimatorSpec EstimatorSpec::fixed_tau(double tau_s) {
  const long us = std::lround(tau_s * 1e6);
  return {Kind::kFixedTau, tau_s, "fixed_" + std::to_string(us) + "us"};
}

namespace {

struct Accum {
  double abs = 0.0, sq = 0.0, ratio = 0.0;
  std::size_t n = 0;

  void add(double truth, double est) {
    const double rel = (truth - est) / truth;
    abs += std::abs(rel);
    sq += rel * rel;
    ratio += est / truth;
    ++n;
  }
};

void check(const CompareConfig& cfg) {
  if (cfg.t1_grid_s.empty()) throw ConfigError("compare: empty T1 grid");
  if (cfg.n_shots == 0) throw ConfigError("compare: n_shots must be positive");
  for (double t : cfg.t1_grid_s) {
    if (!(t > 0.0)) throw ConfigError("compare: T1 values must be positive");
  }
}

double run_one(const EstimatorSpec& est, double t1, std::uint64_t seed, const CompareConfig& cfg,
               const SpamModel& spam_est) {
  SimulatedQubit q({1.0 / t1, {}, std::nullopt}, cfg.spam_sim, 0.0, seed);
  if (est.kind == EstimatorSpec::Kind::kAdaptive) {
    StopRule stop;
    stop.max_shots = cfg.n_shots;
    EstimationConfig ec{cfg.prior, spam_est, AdaptivePolicy(est.value), stop, false};
    const EstimationRun run = run_estimation(q, ec);
    return run.final_posterior.t1_hat();
  }
  std::uint64_t excited = 0;
  for (std::size_t i = 0; i < cfg.n_shots; ++i) excited += to_int(q.measure(est.value).outcome);
  return map_fixed_tau(cfg.n_shots, excited, est.value, cfg.prior, spam_est).t1_s;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t grid_index, std::size_t trial) {
  return CounterRng::stream(seed, grid_index).substream(trial).key();
}

}  // namespace

std::vector<CompareRow> compare_study(const CompareConfig& cfg) {
  check(cfg);
  std::vector<CompareRow> rows;
  for (std::size_t g = 0; g < cfg.t1_grid_s.size(); ++g) {
    const double t1 = cfg.t1_grid_s[g];
    for (const EstimatorSpec& est : cfg.estimators) {
      Accum acc;
      for (std::size_t j = 0; j < cfg.trials; ++j) {
        acc.add(t1, run_one(est, t1, trial_seed(cfg.seed, g, j), cfg, cfg.spam_est));
      }
      const double n = static_cast<double>(std::max<std::size_t>(acc.n, 1));
      rows.push_back({t1, est.name, acc.abs / n, acc.sq / n, acc.ratio / n - 1.0});
    }
  }
  return rows;
}

std::vector<SpamSweepRow> spam_sweep(const CompareConfig& cfg, std::span<const double> est_levels) {
  check(cfg);
  const double c = !cfg.estimators.empty() && cfg.estimators.front().kind == EstimatorSpec::Kind::kAdaptive
                       ? cfg.estimators.front().value
                       : 1.0;
  const EstimatorSpec est = EstimatorSpec::adaptive(c);
  std::vector<SpamSweepRow> rows;
  for (double level : est_levels) {
    const SpamModel spam_est(level, level);
    for (std::size_t g = 0; g < cfg.t1_grid_s.size(); ++g) {
      const double t1 = cfg.t1_grid_s[g];
      Accum acc;
      for (std::size_t j = 0; j < cfg.trials; ++j) {
        acc.add(t1, run_one(est, t1, trial_seed(cfg.seed, g, j), cfg, spam_est));
      }
      const double n = static_cast<double>(std::max<std::size_t>(acc.n, 1));
      rows.push_back({level, t1, acc.abs / n, acc.sq / n, acc.ratio / n - 1.0});
    }
  }
  return rows;
}

InterleavedSweepSource::InterleavedSweepSource(MeasurementSource& inner, const SweepConfig& sweep)
    : inner_(inner), sweep_(sweep) {
  sweep_.validate();
  data_.taus_s.resize(sweep_.n_points);
  for (std::size_t i = 0; i < sweep_.n_points; ++i) data_.taus_s[i] = sweep_.tau(i);
  data_.excited.assign(sweep_.n_points, 0);
  data_.shots.assign(sweep_.n_points, 0);
}

MeasurementSource::Shot InterleavedSweepSource::measure(double tau_s) {
  const Shot adaptive = inner_.measure(tau_s);
  const std::size_t i = next_ % sweep_.n_points;
  const Shot s = inner_.measure(data_.taus_s[i]);
  data_.excited[i] += static_cast<std::uint64_t>(to_int(s.outcome));
  ++data_.shots[i];
  ++next_;
  return adaptive;
}

InterleavedReport run_interleaved(MeasurementSource& source, const EstimationConfig& adaptive,
                                  const SweepConfig& sweep, std::size_t repetitions) {
  InterleavedSweepSource inter(source, sweep);
  InterleavedReport rep;
  rep.repetitions = repetitions;
  EstimationConfig cfg = adaptive;
  cfg.keep_history = false;
  for (std::size_t r = 0; r < repetitions; ++r) {
    inter.restart();
    const EstimationRun run = run_estimation(inter, cfg, r);
    if (run.aborted) {
      ++rep.aborted;
      continue;
    }
    rep.adaptive_t1_s.push_back(run.final_posterior.t1_hat());
  }
  rep.sweep = inter.data();
  const std::size_t n = rep.adaptive_t1_s.size();
  if (n > 0) {
    double sum = 0.0;
    for (double v : rep.adaptive_t1_s) sum += v;
    rep.adaptive_mean_t1_s = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : rep.adaptive_t1_s) ss += (v - rep.adaptive_mean_t1_s) * (v - rep.adaptive_mean_t1_s);
    rep.adaptive_se_s = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  }
  try {
    rep.fit = fit_fractions(rep.sweep);
    rep.fit_ok = true;
  } catch (const NumericalError&) {
    rep.fit_ok = false;
  }
  if (rep.fit_ok && n > 1) {
    const double joint = std::hypot(rep.adaptive_se_s, rep.fit.t1_std_s);
    rep.z = joint > 0.0 ? (rep.adaptive_mean_t1_s - rep.fit.t1_s) / joint : 0.0;
    rep.agree = std::abs(rep.z) <= 2.0;
  }
  return rep;
}

}  // namespace t1track
