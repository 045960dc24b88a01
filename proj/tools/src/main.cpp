#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "t1track/error.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::string> preset;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Bayesian T1 tracking experiments"};
  app.require_subcommand(1);
  Options opt;
  const t1cli::CommandInfo* chosen = nullptr;
  for (const t1cli::CommandInfo& c : t1cli::commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    std::string alias = c.name;
    std::replace(alias.begin(), alias.end(), '-', '_');
    if (alias != c.name) sub->alias(alias);
    sub->add_option("--config", opt.config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "64-bit seed (overrides the config)");
    sub->add_option("--out", opt.out, "output directory")->required();
    sub->add_option("--preset", opt.preset, "named parameter preset (overrides the config)");
    sub->callback([&chosen, &c] { chosen = &c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    const t1cli::ExperimentConfig cfg = t1cli::resolve_config(opt.config, opt.preset, opt.seed);
    const t1cli::OutputDir out(opt.out, cfg.hash());
    out.json_file("config.json", cfg.values);
    const std::string summary = chosen->run(cfg, out);
    out.text("summary.txt", summary);
    std::cout << chosen->name << " (config " << cfg.hash() << ")\n" << summary;
    return 0;
  } catch (const t1track::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const t1track::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
