#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "t1track/estimator.hpp"
#include "t1track/rate_process.hpp"

namespace t1cli {

using nlohmann::json;

/// Fully resolved experiment parameters. Every key is explicit, so dumping `values` and
/// loading the dump again resolves to the same config.
struct ExperimentConfig {
  json values;
  std::filesystem::path base_dir;  // relative input paths resolve against this

  std::uint64_t seed() const;
  std::string hash() const;  // FNV-1a 64 of the canonical dump, hex

  const json& section(const char* name) const { return values.at(name); }

  t1track::GammaPosterior prior() const;
  t1track::SpamModel spam() const;
  t1track::EstimationConfig estimation() const;
  t1track::RateProcessSpec process() const;
  double idle_s() const;
};

json default_config();

/// defaults <- preset <- file contents <- command-line overrides. Unknown keys are rejected.
ExperimentConfig resolve_config(const std::filesystem::path& file, std::optional<std::string> preset,
                                std::optional<std::uint64_t> seed);

ExperimentConfig resolve_config(const json& user, const std::filesystem::path& base_dir,
                                std::optional<std::string> preset, std::optional<std::uint64_t> seed);

t1track::SpamModel spam_from(const json& j);
t1track::GammaPosterior prior_from(const json& j);

}  // namespace t1cli
