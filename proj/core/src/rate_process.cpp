#include "t1track/rate_process.hpp"

#include <cmath>

#include "t1track/error.hpp"

namespace t1track {

void validate(const RateProcessSpec& spec) {
  if (!(spec.gamma_base > 0.0) || !std::isfinite(spec.gamma_base)) {
    throw ConfigError("rate process: gamma_base must be positive");
  }
  for (const Fluctuator& f : spec.fluctuators) {
    if (!(f.rate_up >= 0.0) || !(f.rate_down >= 0.0) || !(f.rate_up + f.rate_down > 0.0) ||
        !(f.delta_gamma >= 0.0)) {
      throw ConfigError("rate process: fluctuator rates and amplitudes must be non-negative");
    }
  }
  if (spec.ensemble) {
    const EnsembleSpec& e = *spec.ensemble;
    if (!(e.gamma_lo > 0.0 && e.gamma_lo <= e.gamma_hi) || !(e.delta_gamma >= 0.0)) {
      throw ConfigError("rate process: invalid ensemble");
    }
  }
}

std::vector<Fluctuator> make_ensemble(const EnsembleSpec& spec, CounterRng& rng) {
  std::vector<Fluctuator> out;
  out.reserve(spec.count);
  const double llo = std::log(spec.gamma_lo);
  const double lhi = std::log(spec.gamma_hi);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const double g = std::exp(llo + (lhi - llo) * rng.uniform());
    out.push_back({0.5 * g, 0.5 * g, spec.delta_gamma, false});
  }
  return out;
}

RateProcess::RateProcess(const RateProcessSpec& spec, CounterRng rng, bool stationary_start)
    : gamma_base_(spec.gamma_base), fluctuators_(spec.fluctuators), rng_(rng) {
  validate(spec);
  if (spec.ensemble) {
    CounterRng ens = rng_.substream(1);
    auto extra = make_ensemble(*spec.ensemble, ens);
    fluctuators_.insert(fluctuators_.end(), extra.begin(), extra.end());
  }
  rng_ = rng_.substream(0);
  if (stationary_start) {
    for (Fluctuator& f : fluctuators_) f.on = rng_.bernoulli(f.on_probability());
  }
  for (std::size_t i = 0; i < fluctuators_.size(); ++i) schedule(i);
  gamma_ = recompute_gamma();
}

void RateProcess::schedule(std::size_t i) {
  const Fluctuator& f = fluctuators_[i];
  const double hold = rng_.exponential(f.on ? f.rate_down : f.rate_up);
  if (std::isfinite(hold)) queue_.push({time_ + hold, i});
}

double RateProcess::recompute_gamma() const noexcept {
  double g = gamma_base_;
  for (const Fluctuator& f : fluctuators_) {
    if (f.on) g += f.delta_gamma;
  }
  return g;
}

double RateProcess::evolve(double duration_s, std::vector<SwitchEvent>* events) {
  if (!(duration_s > 0.0)) return gamma_;
  const double end = time_ + duration_s;
  double integral = 0.0;
  while (!queue_.empty() && queue_.top().time < end) {
    const Pending p = queue_.top();
    queue_.pop();
    integral += gamma_ * (p.time - time_);
    time_ = p.time;
    Fluctuator& f = fluctuators_[p.index];
    f.on = !f.on;
    gamma_ = recompute_gamma();
    if (events) events->push_back({time_, p.index, f.on, gamma_});
    schedule(p.index);
  }
  integral += gamma_ * (end - time_);
  time_ = end;
  return integral / duration_s;
}

std::vector<double> sample_binned(RateProcess& process, double dt_s, std::size_t n) {
  if (!(dt_s > 0.0)) throw ConfigError("sample_binned: dt must be positive");
  std::vector<double> out(n);
  for (double& v : out) v = process.evolve(dt_s);
  return out;
}

}  // namespace t1track
