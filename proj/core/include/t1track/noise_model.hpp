#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "t1track/spectral.hpp"

namespace t1track {

struct Lorentzian {
  double amplitude;  // A_L, variance of the telegraph component (s^2)
  double gamma;      // switching rate (1/s)
};

/// White + 1/f + Lorentzian noise of a T1_hat trace. PSDs are one-sided.
struct NoiseFitModel {
  double a_w = 0.0;   // s^3
  double a_1f = 0.0;  // s^2
  std::vector<Lorentzian> lorentzians;

  // Fit diagnostics; std errors from the Gauss-Newton covariance.
  double a_w_std = 0.0;
  double a_1f_std = 0.0;
  std::vector<Lorentzian> lorentzian_std;
  double psd_residual = 0.0;    // RMS log residual
  double allan_residual = 0.0;  // RMS log residual
  double cost = 0.0;
  bool degenerate = false;
  bool model_selection_ambiguous = false;
};

/// S(f) = A_w + A_1f / f + sum 4 A_L gamma / (gamma^2 + (2 pi f)^2).
double model_psd(const NoiseFitModel& m, double f_hz);

/// sigma(tau) from sigma^2 = A_w / (2 tau) + 2 ln2 A_1f + sum A_L / (gamma tau)^2 (2 gamma tau - 3 + 4 e^-gt - e^-2gt).
/// With `as_printed`, uses the published table forms instead: sqrt(A_w / tau) for the white
/// term and prefactor sqrt(A_L) * gamma * tau for the Lorentzian term.
double model_allan(const NoiseFitModel& m, double tau_s, bool as_printed = false);

/// Allan deviation of a single Lorentzian component with the corrected prefactor.
double lorentzian_allan(double amplitude, double gamma, double tau_s);

struct NoiseFitOptions {
  std::size_t n_lorentzians = 1;  // 0, 1 or 2
  double allan_weight = 1.0;
  std::size_t psd_bins = 40;
  bool check_model_selection = true;
};

/// Joint log-space least squares on a log-binned PSD and the Allan deviation.
/// Throws FitDiverged or ConfigError.
NoiseFitModel fit_noise_model(const Psd& psd, const std::vector<AllanPoint>& allan,
                              const NoiseFitOptions& opts = {});

struct WindowResult {
  double start_s;
  Psd psd;
  std::vector<AllanPoint> allan;
  std::optional<NoiseFitModel> fit;  // empty when this window failed
  std::string error;
};

/// Sliding-window analysis with at most one Lorentzian per window by default.
std::vector<WindowResult> windowed_analysis(const UniformTrace& trace, double window_s, double overlap,
                                            NoiseFitOptions opts = {1, 1.0, 40, false});

}  // namespace t1track
