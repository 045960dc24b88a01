#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "t1track/error.hpp"
#include "t1track/presets.hpp"

namespace t1cli {

using t1track::ConfigError;

namespace {

constexpr int kFormatVersion = 1;

json spam_json(const t1track::SpamModel& s) { return {{"alpha", s.alpha()}, {"beta", s.beta()}}; }

json prior_json(const t1track::GammaPosterior& p) { return {{"k", p.k()}, {"theta_s", p.theta()}}; }

json process_json(const t1track::RateProcessSpec& p, double idle_s) {
  json f = json::array();
  for (const t1track::Fluctuator& x : p.fluctuators) {
    f.push_back({{"rate_up", x.rate_up}, {"rate_down", x.rate_down}, {"delta_gamma", x.delta_gamma}, {"on", x.on}});
  }
  json e = nullptr;
  if (p.ensemble) {
    e = {{"count", p.ensemble->count},
         {"gamma_lo", p.ensemble->gamma_lo},
         {"gamma_hi", p.ensemble->gamma_hi},
         {"delta_gamma", p.ensemble->delta_gamma}};
  }
  return {{"gamma_base_per_s", p.gamma_base}, {"idle_s", idle_s}, {"fluctuators", f}, {"ensemble", e}};
}

json preset_json(const std::string& name) {
  const t1track::Preset p = t1track::make_preset(name);
  return {{"preset", name},
          {"prior", prior_json(p.prior)},
          {"spam", spam_json(p.spam)},
          {"policy", {{"c", p.c}}},
          {"simulator", process_json(p.process, p.idle_s)},
          {"budget", {{"n_shots", p.n_shots}}},
          {"interleave", {{"tau0_s", p.sweep_tau0_s}, {"n_points", p.sweep_points}}}};
}

// Objects merge key by key; anything else (arrays included) is replaced.
// Keys absent from `into` are errors, except inside free-form objects marked by null defaults.
void merge(json& into, const json& from, const std::string& where) {
  if (!from.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  for (auto it = from.begin(); it != from.end(); ++it) {
    const std::string path = where.empty() ? it.key() : where + "." + it.key();
    if (!into.contains(it.key())) throw ConfigError("config: unknown key '" + path + "'");
    json& dst = into[it.key()];
    if (dst.is_object() && it->is_object()) {
      merge(dst, *it, path);
    } else {
      dst = *it;
    }
  }
}

double num(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

json default_config() {
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back((100.0 + 50.0 * i) * 1e-6);
  json j = preset_json("fig1f");
  j["preset"] = nullptr;
  j["format_version"] = kFormatVersion;
  j["seed"] = 1;
  j["policy"]["tau_min_s"] = 1e-6;
  j["policy"]["tau_max_s"] = 5e-3;
  j["budget"]["repetitions"] = 100;
  j["budget"]["time_budget_s"] = nullptr;
  j["budget"]["target_t1_std_s"] = nullptr;
  j["track"] = {{"band_window", 5}, {"trajectory", true}};
  j["interleave"]["repetitions"] = 200;
  j["compare"] = {{"t1_grid_s", grid},
                  {"trials", 2000},
                  {"n_shots", 100},
                  {"spam_sim", {{"alpha", 0.12}, {"beta", 0.12}}},
                  {"spam_est", {{"alpha", 0.12}, {"beta", 0.12}}},
                  {"prior", {{"k", 3.0}, {"theta_s", 450e-6}}},
                  {"c", 1.0},
                  {"fixed_tau_s", {100e-6, 250e-6, 500e-6}}};
  j["spam_sweep"] = {{"true_spam", {{"alpha", 0.025}, {"beta", 0.025}}},
                     {"levels", {0.005, 0.01, 0.025, 0.05, 0.075, 0.1}},
                     {"trials", 10000}};
  j["kl_scan"] = {{"k", {3.0, 10.0, 20.0}},
                  {"tau_over_theta_lo", 0.01},
                  {"tau_over_theta_hi", 10.0},
                  {"tau_points", 25},
                  {"spam_levels", {0.0, 0.01, 0.05}},
                  {"outcome", 1}};
  j["opt_tau"] = {{"gamma1_per_s", {2.5e3, 5e3, 1e4}},
                  {"idle_s", {0.0, 2.32e-5, 1e-4, 3.45e-4, 1e-3}}};
  j["analyze"] = {{"trace_csv", nullptr},
                  {"duration_s", 600.0},
                  {"window_s", nullptr},
                  {"overlap", 0.5},
                  {"n_lorentzians", 1},
                  {"allan_weight", 1.0},
                  {"psd_bins", 40}};
  j["detect"] = {{"duration_s", 60.0},
                 {"interval_s", 0.2},
                 {"band_lo_s", 100e-6},
                 {"band_hi_s", 400e-6},
                 {"min_jump_s", 100e-6},
                 {"level", 0.975}};
  j["validate"] = {{"n_test", 200}, {"repetitions", 100}, {"margin", 0.2}, {"level", 0.95}};
  j["freq_limit"] = {{"runs", 1000}, {"groups", 5}};
  return j;
}

ExperimentConfig resolve_config(const json& user, const std::filesystem::path& base_dir,
                                std::optional<std::string> preset, std::optional<std::uint64_t> seed) {
  if (!user.is_object()) throw ConfigError("config: top level must be an object");
  json out = default_config();
  json given = user;
  given.erase("config_hash");  // present in configs written back by a previous run
  if (!preset && user.contains("preset") && user["preset"].is_string()) preset = user["preset"].get<std::string>();
  if (preset) merge(out, preset_json(*preset), "");
  merge(out, given, "");
  if (preset) out["preset"] = *preset;
  if (seed) out["seed"] = *seed;
  if (!out["seed"].is_number_unsigned()) throw ConfigError("config: 'seed' must be a non-negative integer");
  if (out["format_version"] != kFormatVersion) throw ConfigError("config: unsupported format_version");

  ExperimentConfig cfg{out, base_dir};
  // Fail early on anything the core would reject later.
  try {
    (void)cfg.estimation();
    t1track::validate(cfg.process());
    (void)spam_from(out["compare"]["spam_sim"]);
    (void)spam_from(out["compare"]["spam_est"]);
    (void)spam_from(out["spam_sweep"]["true_spam"]);
    (void)prior_from(out["compare"]["prior"]);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const t1track::NumericalError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(cfg.idle_s() >= 0.0)) throw ConfigError("config: simulator.idle_s must be >= 0");
  return cfg;
}

ExperimentConfig resolve_config(const std::filesystem::path& file, std::optional<std::string> preset,
                                std::optional<std::uint64_t> seed) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open '" + file.string() + "'");
  json user;
  try {
    user = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + file.string() + ": " + e.what());
  }
  return resolve_config(user, file.parent_path(), std::move(preset), seed);
}

std::uint64_t ExperimentConfig::seed() const { return values.at("seed").get<std::uint64_t>(); }

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : values.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

t1track::SpamModel spam_from(const json& j) { return t1track::SpamModel(num(j, "alpha"), num(j, "beta")); }

t1track::GammaPosterior prior_from(const json& j) { return t1track::GammaPosterior(num(j, "k"), num(j, "theta_s")); }

t1track::GammaPosterior ExperimentConfig::prior() const { return prior_from(values.at("prior")); }

t1track::SpamModel ExperimentConfig::spam() const { return spam_from(values.at("spam")); }

t1track::EstimationConfig ExperimentConfig::estimation() const {
  const json& pol = values.at("policy");
  const json& b = values.at("budget");
  t1track::EstimationConfig cfg;
  cfg.prior = prior();
  cfg.spam = spam();
  cfg.policy = t1track::AdaptivePolicy(num(pol, "c"), num(pol, "tau_min_s"), num(pol, "tau_max_s"));
  cfg.stop.max_shots = b.at("n_shots").get<std::size_t>();
  if (!b.at("time_budget_s").is_null()) cfg.stop.time_budget_s = num(b, "time_budget_s");
  if (!b.at("target_t1_std_s").is_null()) cfg.stop.target_t1_std_s = num(b, "target_t1_std_s");
  cfg.keep_history = true;
  return cfg;
}

t1track::RateProcessSpec ExperimentConfig::process() const {
  const json& s = values.at("simulator");
  t1track::RateProcessSpec p;
  p.gamma_base = num(s, "gamma_base_per_s");
  for (const json& f : s.at("fluctuators")) {
    p.fluctuators.push_back({num(f, "rate_up"), num(f, "rate_down"), num(f, "delta_gamma"),
                             f.value("on", false)});
  }
  if (const json& e = s.at("ensemble"); !e.is_null()) {
    p.ensemble = t1track::EnsembleSpec{e.at("count").get<std::size_t>(), num(e, "gamma_lo"), num(e, "gamma_hi"),
                                       num(e, "delta_gamma")};
  }
  return p;
}

double ExperimentConfig::idle_s() const { return num(values.at("simulator"), "idle_s"); }

}  // namespace t1cli
