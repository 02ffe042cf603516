#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "curvlab/report.hpp"

namespace curvlab {

struct RunOptions {
  int threads = 0;  // 0 = auto
  std::string out_override;
  std::optional<std::uint64_t> seed_override;
  bool quiet = false;
};

struct RunOutcome {
  bool pass = false;
  std::string report_json;
  std::string out_path;
};

/// Executes every configured task, writes the JSON report, and prints a one
/// line summary per task. Task failures are captured in the report, not
/// thrown; exit-worthy errors (bad config) do throw.
RunOutcome run_config(TaskConfig cfg, const RunOptions& options);

/// Task catalog listing for the CLI.
std::string list_tasks_text();

}  // namespace curvlab
