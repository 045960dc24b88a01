#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace t1cli {

/// Runs one experiment, writes its files and returns the human-readable summary.
using Command = std::function<std::string(const ExperimentConfig&, const OutputDir&)>;

struct CommandInfo {
  std::string name;  // dashed spelling; the underscore spelling is accepted as an alias
  std::string help;
  Command run;
};

const std::vector<CommandInfo>& commands();

/// Trace CSV with columns lab_time_s, t1_hat_s and optionally dt1_std_s.
struct TraceColumns {
  std::vector<double> time_s, t1_s, std_s;
};
TraceColumns read_trace_csv(const std::filesystem::path& path);

}  // namespace t1cli
