#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "t1track/baselines.hpp"
#include "t1track/error.hpp"
#include "t1track/kl_divergence.hpp"
#include "t1track/noise_model.hpp"
#include "t1track/numerics.hpp"
#include "t1track/qubit_simulator.hpp"
#include "t1track/spectral.hpp"
#include "t1track/switch_detection.hpp"
#include "t1track/trace_tools.hpp"
#include "t1track/validation.hpp"
#include "t1track/wait_optimizer.hpp"

namespace t1cli {

using namespace t1track;

namespace {

std::string line(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return std::string(buf) + "\n";
}

std::string s(std::size_t v) { return std::to_string(v); }
std::string b(bool v) { return v ? "1" : "0"; }

std::vector<double> doubles(const json& j) { return j.get<std::vector<double>>(); }

SimulatedQubit make_qubit(const ExperimentConfig& cfg, bool trajectory = false) {
  return SimulatedQubit(cfg.process(), cfg.spam(), cfg.idle_s(), cfg.seed(), trajectory);
}

std::vector<EstimationRun> track_for(const ExperimentConfig& cfg, double duration_s, bool history) {
  SimulatedQubit q = make_qubit(cfg);
  EstimationConfig ec = cfg.estimation();
  ec.keep_history = history;
  std::vector<EstimationRun> runs;
  while (q.lab_time() < duration_s) {
    runs.push_back(run_estimation(q, ec, runs.size()));
    if (runs.back().shots == 0) throw ConfigError("tracking made no progress");
  }
  return runs;
}

void write_posterior_row(OutputDir::Csv& csv, double t, const GammaPosterior& p) {
  const auto [lo, hi] = credible_interval(p, 0.9);
  csv.row({fmt_num(t), fmt_num(p.k()), fmt_num(p.theta()), fmt_num(p.t1_hat()), fmt_num(lo), fmt_num(hi)});
}

std::string cmd_track(const ExperimentConfig& cfg, const OutputDir& out) {
  const bool traj = cfg.section("track").at("trajectory").get<bool>();
  SimulatedQubit q = make_qubit(cfg, traj);
  const EstimationConfig ec = cfg.estimation();
  const auto reps = cfg.section("budget").at("repetitions").get<std::size_t>();
  const auto runs = run_repetitions(q, ec, reps);

  auto shots = out.csv("shots.csv", {"rep_index", "shot_index", "lab_time_s", "tau_s", "outcome"});
  auto post = out.csv("posterior.csv", {"rep_index", "shot_index", "lab_time_s", "k", "theta_s", "t1_hat_s"});
  auto trace = out.csv("trace.csv", {"lab_time_s", "k", "theta_s", "t1_hat_s", "ci_lo_s", "ci_hi_s"});
  std::size_t aborted = 0;
  double sum = 0.0;
  for (const EstimationRun& r : runs) {
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      const ProbeRecord& p = r.records[i];
      shots.row({s(p.rep_index), s(p.shot_index), fmt_num(p.lab_time_s), fmt_num(p.tau_s),
                 p.outcome == Outcome::kExcited ? "1" : "0"});
      if (i < r.posterior_trace.size()) {
        const GammaPosterior& g = r.posterior_trace[i];
        post.row({s(p.rep_index), s(p.shot_index), fmt_num(p.lab_time_s), fmt_num(g.k()), fmt_num(g.theta()),
                  fmt_num(g.t1_hat())});
      }
    }
    if (r.aborted) {
      ++aborted;
      continue;
    }
    write_posterior_row(trace, r.end_lab_time_s, r.final_posterior);
    sum += r.final_posterior.t1_hat();
  }

  auto band_csv = out.csv("moving_mean.csv", {"lab_time_s", "mean_s", "lo_s", "hi_s"});
  const std::size_t good = runs.size() - aborted;
  if (good >= 2) {
    const UniformTrace u = trace_from_runs(runs);
    const double t0 = [&] {
      for (const EstimationRun& r : runs)
        if (!r.aborted) return r.end_lab_time_s;
      return 0.0;
    }();
    const MovingBand band = moving_mean_band(u, cfg.section("track").at("band_window").get<std::size_t>());
    for (std::size_t i = 0; i < u.size(); ++i) {
      band_csv.row({fmt_num(t0 + static_cast<double>(i) * u.dt_s), fmt_num(band.mean[i]), fmt_num(band.lo[i]),
                    fmt_num(band.hi[i])});
    }
  }
  if (traj) {
    auto t = out.csv("trajectory.csv", {"time_s", "gamma1_per_s"});
    for (const TrajectoryPoint& p : q.trajectory()) t.row({fmt_num(p.time_s), fmt_num(p.gamma1_per_s)});
  }
  std::string sum_txt = line("repetitions: %zu (aborted %zu)", runs.size(), aborted);
  if (good) sum_txt += line("mean T1_hat: %.2f us", sum / static_cast<double>(good) * 1e6);
  sum_txt += line("lab time: %.6f s", q.lab_time());
  return sum_txt;
}

std::string cmd_interleave(const ExperimentConfig& cfg, const OutputDir& out) {
  const json& sec = cfg.section("interleave");
  SimulatedQubit q = make_qubit(cfg);
  EstimationConfig ec = cfg.estimation();
  ec.keep_history = false;
  SweepConfig sweep;
  sweep.tau0_s = sec.at("tau0_s").get<double>();
  sweep.n_points = sec.at("n_points").get<std::size_t>();
  sweep.reps_per_point = 1;
  sweep.order = SweepConfig::Order::kInterleaved;
  const InterleavedReport r = run_interleaved(q, ec, sweep, sec.at("repetitions").get<std::size_t>());

  auto a = out.csv("adaptive.csv", {"rep_index", "t1_hat_s"});
  for (std::size_t i = 0; i < r.adaptive_t1_s.size(); ++i) a.row({s(i), fmt_num(r.adaptive_t1_s[i])});
  auto sw = out.csv("sweep.csv", {"tau_s", "excited", "shots"});
  for (std::size_t i = 0; i < r.sweep.taus_s.size(); ++i) {
    sw.row({fmt_num(r.sweep.taus_s[i]), s(r.sweep.excited[i]), s(r.sweep.shots[i])});
  }
  json rep = {{"repetitions", r.repetitions},
              {"aborted", r.aborted},
              {"adaptive_mean_t1_s", r.adaptive_mean_t1_s},
              {"adaptive_se_s", r.adaptive_se_s},
              {"fit_ok", r.fit_ok},
              {"z", r.z},
              {"agree", r.agree}};
  if (r.fit_ok) {
    rep["fit"] = {{"t1_s", r.fit.t1_s},       {"t1_std_s", r.fit.t1_std_s}, {"gamma1_per_s", r.fit.gamma1_per_s},
                  {"gamma1_std", r.fit.gamma1_std}, {"alpha", r.fit.alpha},    {"beta", r.fit.beta},
                  {"residual_norm", r.fit.residual_norm}};
  }
  out.json_file("interleave.json", rep);
  std::string txt = line("repetitions: %zu (aborted %zu)", r.repetitions, r.aborted);
  if (r.fit_ok) {
    txt += line("adaptive mean T1: %.2f +- %.2f us", r.adaptive_mean_t1_s * 1e6, r.adaptive_se_s * 1e6);
    txt += line("sweep fit T1: %.2f +- %.2f us", r.fit.t1_s * 1e6, r.fit.t1_std_s * 1e6);
    txt += line("z = %.3f, agree within 2 sigma: %s", r.z, r.agree ? "yes" : "no");
  } else {
    txt += "no sweep fit\n";
  }
  return txt;
}

CompareConfig compare_config(const ExperimentConfig& cfg) {
  const json& sec = cfg.section("compare");
  CompareConfig cc;
  cc.t1_grid_s = doubles(sec.at("t1_grid_s"));
  cc.trials = sec.at("trials").get<std::size_t>();
  cc.n_shots = sec.at("n_shots").get<std::size_t>();
  cc.spam_sim = spam_from(sec.at("spam_sim"));
  cc.spam_est = spam_from(sec.at("spam_est"));
  cc.prior = prior_from(sec.at("prior"));
  cc.estimators = {EstimatorSpec::adaptive(sec.at("c").get<double>())};
  for (double t : doubles(sec.at("fixed_tau_s"))) cc.estimators.push_back(EstimatorSpec::fixed_tau(t));
  cc.seed = cfg.seed();
  return cc;
}

std::string cmd_compare(const ExperimentConfig& cfg, const OutputDir& out) {
  const CompareConfig cc = compare_config(cfg);
  const auto rows = compare_study(cc);
  auto csv = out.csv("compare.csv", {"true_t1_s", "estimator", "mare", "msre", "bias"});
  for (const CompareRow& r : rows) {
    csv.row({fmt_num(r.true_t1_s), r.estimator, fmt_num(r.mare), fmt_num(r.msre), fmt_num(r.bias)});
  }
  std::string txt = line("%zu trials x %zu shots per grid point", cc.trials, cc.n_shots);
  for (const EstimatorSpec& e : cc.estimators) {
    double lo = INFINITY, hi = 0.0;
    for (const CompareRow& r : rows) {
      if (r.estimator != e.name) continue;
      lo = std::min(lo, r.mare);
      hi = std::max(hi, r.mare);
    }
    txt += line("%-14s MARE range [%.4f, %.4f]", e.name.c_str(), lo, hi);
  }
  return txt;
}

std::string cmd_spam_sweep(const ExperimentConfig& cfg, const OutputDir& out) {
  const json& sec = cfg.section("spam_sweep");
  CompareConfig cc = compare_config(cfg);
  cc.spam_sim = spam_from(sec.at("true_spam"));
  cc.trials = sec.at("trials").get<std::size_t>();
  cc.estimators.resize(1);
  const std::vector<double> levels = doubles(sec.at("levels"));
  const auto rows = spam_sweep(cc, levels);
  auto csv = out.csv("spam_sweep.csv", {"spam_est", "true_t1_s", "mare", "msre", "bias"});
  for (const SpamSweepRow& r : rows) {
    csv.row({fmt_num(r.spam_est), fmt_num(r.true_t1_s), fmt_num(r.mare), fmt_num(r.msre), fmt_num(r.bias)});
  }
  std::string txt = line("true alpha=%.4f beta=%.4f", cc.spam_sim.alpha(), cc.spam_sim.beta());
  for (double l : levels) {
    double m = 0.0;
    std::size_t n = 0;
    for (const SpamSweepRow& r : rows) {
      if (r.spam_est == l) {
        m += r.mare;
        ++n;
      }
    }
    txt += line("estimator level %.4f: grid-mean MARE %.4f", l, n ? m / static_cast<double>(n) : NAN);
  }
  return txt;
}

std::string cmd_kl_scan(const ExperimentConfig& cfg, const OutputDir& out) {
  const json& sec = cfg.section("kl_scan");
  const std::vector<double> ks = doubles(sec.at("k"));
  const std::vector<double> levels = doubles(sec.at("spam_levels"));
  const std::vector<double> taus = log_space(sec.at("tau_over_theta_lo").get<double>(),
                                             sec.at("tau_over_theta_hi").get<double>(),
                                             sec.at("tau_points").get<std::size_t>());
  const Outcome m = sec.at("outcome").get<int>() ? Outcome::kExcited : Outcome::kGround;
  const auto rows = kl_scan(ks, taus, levels, m);
  auto csv = out.csv("kl_scan.csv", {"k", "tau_over_theta", "spam_level", "kl_gamma", "kl_truncated_normal"});
  for (const KlScanRow& r : rows) {
    csv.row({fmt_num(r.k), fmt_num(r.tau_over_theta), fmt_num(r.spam_level), fmt_num(r.kl_gamma),
             fmt_num(r.kl_truncated_normal)});
  }
  auto worst = out.csv("kl_worst.csv", {"k", "spam_level", "tau_over_theta", "kl_gamma"});
  std::string txt;
  for (double k : ks) {
    for (double l : levels) {
      try {
        const WorstCase w = worst_case_kl(k, m, SpamModel(l, l), Approximant::kGamma, taus.front(), taus.back());
        worst.row({fmt_num(k), fmt_num(l), fmt_num(w.tau_over_theta), fmt_num(w.kl)});
        txt += line("k=%g spam=%g: max KL %.5f at tau/theta=%.3f", k, l, w.kl, w.tau_over_theta);
      } catch (const NumericalError& e) {
        worst.row({fmt_num(k), fmt_num(l), "", ""});
        txt += line("k=%g spam=%g: %s", k, l, e.what());
      }
    }
  }
  return txt;
}

std::string cmd_opt_tau(const ExperimentConfig& cfg, const OutputDir& out) {
  const json& sec = cfg.section("opt_tau");
  const std::vector<double> gammas = doubles(sec.at("gamma1_per_s"));
  const std::vector<double> idles = doubles(sec.at("idle_s"));
  const SpamModel spam = cfg.spam();
  const auto table = export_c_table(gammas, idles, spam);
  auto csv = out.csv("c_table.csv", {"gamma1_per_s", "idle_s", "c_opt"});
  for (const CTableRow& r : table) csv.row({fmt_num(r.gamma1_per_s), fmt_num(r.idle_s), fmt_num(r.c_opt)});
  std::string txt = line("alpha=%.4f beta=%.4f", spam.alpha(), spam.beta());
  txt += line("shot-limited, no SPAM: c = %.7f",
              tau_opt_closed_form(ClosedFormCase::kShotLimitedNoSpam, 1.0).c_opt);
  txt += line("zero idle, beta = 0, alpha = %.4f: c = %.7f", spam.alpha(),
              tau_opt_closed_form(ClosedFormCase::kZeroIdleBeta0, 1.0, spam.alpha()).c_opt);
  for (const CTableRow& r : table) {
    txt += r.c_opt ? line("T1=%.1f us, idle=%.1f us: c_opt = %.4f", 1e6 / r.gamma1_per_s, r.idle_s * 1e6, *r.c_opt)
                   : line("T1=%.1f us, idle=%.1f us: no interior minimum", 1e6 / r.gamma1_per_s, r.idle_s * 1e6);
  }
  return txt;
}

json fit_json(const NoiseFitModel& m) {
  json ls = json::array();
  for (std::size_t i = 0; i < m.lorentzians.size(); ++i) {
    ls.push_back({{"amplitude", m.lorentzians[i].amplitude},
                  {"gamma", m.lorentzians[i].gamma},
                  {"amplitude_std", m.lorentzian_std[i].amplitude},
                  {"gamma_std", m.lorentzian_std[i].gamma}});
  }
  return {{"a_w", m.a_w},
          {"a_w_std", m.a_w_std},
          {"a_1f", m.a_1f},
          {"a_1f_std", m.a_1f_std},
          {"lorentzians", ls},
          {"psd_residual", m.psd_residual},
          {"allan_residual", m.allan_residual},
          {"cost", m.cost},
          {"degenerate", m.degenerate},
          {"model_selection_ambiguous", m.model_selection_ambiguous}};
}

std::string cmd_analyze(const ExperimentConfig& cfg, const OutputDir& out) {
  const json& sec = cfg.section("analyze");
  TraceColumns cols;
  if (sec.at("trace_csv").is_null()) {
    const auto runs = track_for(cfg, sec.at("duration_s").get<double>(), false);
    auto in = out.csv("trace_input.csv", {"lab_time_s", "t1_hat_s", "dt1_std_s"});
    for (const EstimationRun& r : runs) {
      if (r.aborted) continue;
      cols.time_s.push_back(r.end_lab_time_s);
      cols.t1_s.push_back(r.final_posterior.t1_hat());
      cols.std_s.push_back(r.final_posterior.t1_std());
      in.row({fmt_num(cols.time_s.back()), fmt_num(cols.t1_s.back()), fmt_num(cols.std_s.back())});
    }
  } else {
    cols = read_trace_csv(cfg.base_dir / sec.at("trace_csv").get<std::string>());
  }
  const UniformTrace trace = resample_uniform(cols.time_s, cols.t1_s, cols.std_s);

  NoiseFitOptions opts;
  opts.n_lorentzians = sec.at("n_lorentzians").get<std::size_t>();
  opts.allan_weight = sec.at("allan_weight").get<double>();
  opts.psd_bins = sec.at("psd_bins").get<std::size_t>();
  const Psd psd = welch_psd(trace);
  const auto allan = allan_deviation(trace, allan_taus(trace));
  const NoiseFitModel fit = fit_noise_model(psd, allan, opts);

  auto p = out.csv("psd.csv", {"freq_hz", "psd_s3"});
  for (std::size_t i = 0; i < psd.freqs_hz.size(); ++i) p.row({fmt_num(psd.freqs_hz[i]), fmt_num(psd.values[i])});
  auto a = out.csv("allan.csv", {"tau_s", "adev_s", "n_samples"});
  for (const AllanPoint& x : allan) a.row({fmt_num(x.tau_s), fmt_num(x.adev), s(x.n_samples)});
  json fj = fit_json(fit);
  fj["samples"] = trace.size();
  fj["dt_s"] = trace.dt_s;
  out.json_file("fit.json", fj);

  std::string txt = line("%zu samples, dt = %.6g s", trace.size(), trace.dt_s);
  txt += line("A_w = %.4g s^3, A_1f = %.4g s^2", fit.a_w, fit.a_1f);
  for (const Lorentzian& l : fit.lorentzians) txt += line("Lorentzian A_L = %.4g s^2, gamma = %.4g 1/s", l.amplitude, l.gamma);
  if (fit.model_selection_ambiguous) txt += "model selection ambiguous\n";

  if (!sec.at("window_s").is_null()) {
    NoiseFitOptions wopts = opts;
    wopts.check_model_selection = false;
    const auto windows = windowed_analysis(trace, sec.at("window_s").get<double>(), sec.at("overlap").get<double>(), wopts);
    auto w = out.csv("windows.csv", {"start_s", "ok", "a_w", "a_1f", "amplitude_1", "gamma_1", "amplitude_2", "gamma_2",
                                     "error"});
    std::size_t failed = 0;
    for (const WindowResult& r : windows) {
      std::vector<std::string> row{fmt_num(r.start_s), b(r.fit.has_value())};
      if (r.fit) {
        row.push_back(fmt_num(r.fit->a_w));
        row.push_back(fmt_num(r.fit->a_1f));
        for (std::size_t i = 0; i < 2; ++i) {
          const bool have = i < r.fit->lorentzians.size();
          row.push_back(have ? fmt_num(r.fit->lorentzians[i].amplitude) : "");
          row.push_back(have ? fmt_num(r.fit->lorentzians[i].gamma) : "");
        }
      } else {
        ++failed;
        row.insert(row.end(), 6, "");
      }
      std::string err = r.error;
      std::replace(err.begin(), err.end(), ',', ';');
      row.push_back(err);
      w.row(row);
    }
    txt += line("%zu windows, %zu failed", windows.size(), failed);
  }
  return txt;
}

std::string cmd_detect(const ExperimentConfig& cfg, const OutputDir& out) {
  const json& sec = cfg.section("detect");
  const auto runs = track_for(cfg, sec.at("duration_s").get<double>(), true);
  SwitchConfig sc;
  sc.interval_s = sec.at("interval_s").get<double>();
  sc.band_lo_s = sec.at("band_lo_s").get<double>();
  sc.band_hi_s = sec.at("band_hi_s").get<double>();
  sc.min_jump_s = sec.at("min_jump_s").get<double>();
  sc.level = sec.at("level").get<double>();
  sc.spam = cfg.spam();
  const SwitchReport r = detect_switches(runs, sc);
  json ev = json::array();
  for (const DetectedSwitch& e : r.events) {
    ev.push_back({{"time_s", e.time_s}, {"t1_before_s", e.t1_before_s}, {"t1_after_s", e.t1_after_s}});
  }
  out.json_file("events.json", {{"intervals", r.intervals},
                                {"filtered", r.filtered},
                                {"pairs", r.pairs},
                                {"candidates", r.candidates},
                                {"verified", r.verified},
                                {"duration_s", r.duration_s},
                                {"filtered_fraction", r.filtered_fraction},
                                {"verified_fraction", r.verified_fraction},
                                {"event_rate_hz", r.event_rate_hz},
                                {"mean_interevent_s", std::isfinite(r.mean_interevent_s) ? json(r.mean_interevent_s)
                                                                                          : json(nullptr)},
                                {"false_positive_bound_hz", r.false_positive_bound_hz},
                                {"events", ev}});
  std::string txt = line("%zu repetitions over %.3f s, %zu intervals", runs.size(), r.duration_s, r.intervals);
  txt += line("filtered %.1f%%, verified %.1f%% of %zu candidates", 100.0 * r.filtered_fraction,
              100.0 * r.verified_fraction, r.candidates);
  txt += std::isfinite(r.mean_interevent_s) ? line("one verified switch every %.3f s", r.mean_interevent_s)
                                            : std::string("no verified switch\n");
  txt += line("false-positive bound %.4g Hz", r.false_positive_bound_hz);
  return txt;
}

std::string cmd_validate(const ExperimentConfig& cfg, const OutputDir& out) {
  const json& sec = cfg.section("validate");
  ValidationConfig vc;
  vc.adaptive = cfg.estimation();
  vc.adaptive.keep_history = false;
  vc.n_test = sec.at("n_test").get<std::size_t>();
  vc.repetitions = sec.at("repetitions").get<std::size_t>();
  vc.margin = sec.at("margin").get<double>();
  vc.level = sec.at("level").get<double>();
  SimulatedQubit q = make_qubit(cfg);
  const ValidationReport r = run_validation_protocol(q, vc);
  auto reps = out.csv("validation_reps.csv", {"t1_hat_s", "excited", "mean_outcome", "weak_greater", "strong_greater",
                                              "weak_less", "strong_less"});
  for (const ValidationRep& v : r.reps) {
    reps.row({fmt_num(v.t1_hat_s), s(v.excited), fmt_num(v.mean_outcome), b(v.greater.weak), b(v.greater.strong),
              b(v.less.weak), b(v.less.strong)});
  }
  auto st = out.csv("validation.csv", {"lo_s", "hi_s", "count", "weak_greater", "strong_greater", "weak_less",
                                       "strong_less", "mean_outcome"});
  for (const ValidationStratum& x : r.strata) {
    st.row({fmt_num(x.lo_s), fmt_num(x.hi_s), s(x.count), fmt_num(x.weak_greater), fmt_num(x.strong_greater),
            fmt_num(x.weak_less), fmt_num(x.strong_less), fmt_num(x.mean_outcome)});
  }
  out.json_file("validation.json", {{"repetitions", r.reps.size()},
                                    {"aborted", r.aborted},
                                    {"weak_greater_rate", r.weak_greater_rate},
                                    {"strong_greater_rate", r.strong_greater_rate},
                                    {"weak_less_rate", r.weak_less_rate},
                                    {"strong_less_rate", r.strong_less_rate}});
  std::string txt = line("%zu repetitions (aborted %zu), %zu test shots each", r.reps.size(), r.aborted, vc.n_test);
  txt += line("T1 > %.2f T1_hat: weak %.3f, strong %.3f", 1.0 - vc.margin, r.weak_greater_rate, r.strong_greater_rate);
  txt += line("T1 < %.2f T1_hat: weak %.3f, strong %.3f", 1.0 + vc.margin, r.weak_less_rate, r.strong_less_rate);
  return txt;
}

std::string cmd_freq_limit(const ExperimentConfig& cfg, const OutputDir& out) {
  const json& sec = cfg.section("freq_limit");
  SimulatedQubit q = make_qubit(cfg);
  const FrequentistSummary r =
      frequentist_study(q, cfg.estimation(), sec.at("runs").get<std::size_t>(), sec.at("groups").get<std::size_t>());
  auto csv = out.csv("freq_limit.csv", {"elapsed_s", "t1_hat_s", "ci68_width_s", "limit_s"});
  for (const FrequentistRun& f : r.runs) {
    csv.row({fmt_num(f.elapsed_s), fmt_num(f.t1_hat_s), fmt_num(f.ci68_width_s), fmt_num(f.limit_s)});
  }
  out.json_file("freq_limit.json",
                {{"runs", r.runs.size()}, {"mean_ratio", r.mean_ratio}, {"group_means", r.group_means},
                 {"overall_mean", r.overall_mean}});
  std::string txt = line("%zu runs, mean ratio to the frequentist limit %.3f", r.runs.size(), r.mean_ratio);
  for (std::size_t i = 0; i < r.group_means.size(); ++i) {
    txt += line("elapsed-time group %zu: scaled width %.4f", i + 1, r.group_means[i]);
  }
  return txt;
}

}  // namespace

TraceColumns read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace '" + path.string() + "'");
  TraceColumns t;
  std::string ln;
  std::vector<std::string> header;
  int ti = -1, vi = -1, si = -1;
  std::size_t lineno = 0;
  while (std::getline(in, ln)) {
    ++lineno;
    if (ln.empty() || ln[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(ln);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (header.empty()) {
      header = cells;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "lab_time_s") ti = static_cast<int>(i);
        if (header[i] == "t1_hat_s") vi = static_cast<int>(i);
        if (header[i] == "dt1_std_s") si = static_cast<int>(i);
      }
      if (ti < 0 || vi < 0) throw ConfigError(path.string() + ": need lab_time_s and t1_hat_s columns");
      continue;
    }
    try {
      t.time_s.push_back(std::stod(cells.at(static_cast<std::size_t>(ti))));
      t.t1_s.push_back(std::stod(cells.at(static_cast<std::size_t>(vi))));
      if (si >= 0) t.std_s.push_back(std::stod(cells.at(static_cast<std::size_t>(si))));
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    }
  }
  return t;
}

const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> all = {
      {"track", "repeated adaptive estimation against the simulator", cmd_track},
      {"interleave", "adaptive shots interleaved with a linear sweep", cmd_interleave},
      {"compare", "adaptive vs fixed-tau MAP error study", cmd_compare},
      {"spam-sweep", "estimator SPAM mismatch sweep", cmd_spam_sweep},
      {"kl-scan", "KL divergence of the gamma approximation", cmd_kl_scan},
      {"opt-tau", "optimal wait-time prefactor table", cmd_opt_tau},
      {"analyze", "PSD, Allan deviation and noise-model fit of a trace", cmd_analyze},
      {"detect", "T1 switch-event detection", cmd_detect},
      {"validate", "weak/strong binomial validation tests", cmd_validate},
      {"freq-limit", "posterior width against the frequentist limit", cmd_freq_limit},
  };
  return all;
}

}  // namespace t1cli
