#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "t1track/gamma_posterior.hpp"
#include "t1track/rate_process.hpp"

namespace t1track {

/// Parameter bundle for one of the reproduced experiments.
/// Fluctuator parameters are synthetic; the device's TLS couplings are not known.
struct Preset {
  std::string name;
  RateProcessSpec process;
  SpamModel spam;
  double idle_s = 0.0;
  GammaPosterior prior{3.0, 450e-6};
  double c = 0.51;
  std::size_t n_shots = 50;
  double sweep_tau0_s = 12e-6;  // nonadaptive sweep step for interleaved runs
  std::size_t sweep_points = 50;
};

/// Throws UnknownPreset.
Preset make_preset(std::string_view name);

std::vector<std::string> preset_names();

}  // namespace t1track
