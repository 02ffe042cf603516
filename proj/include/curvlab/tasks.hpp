#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/config.hpp"

namespace curvlab {

struct TaskContext {
  const TaskConfig* cfg = nullptr;
  int threads = 1;
  std::vector<std::vector<double>> points;  // seeded interior sample points
};

struct TaskResult {
  double residual_max = 0.0;
  double residual_mean = 0.0;
  std::optional<double> normalization;
  std::vector<double> ladder;
  std::optional<double> fd_order;
  double tol = 0.0;
  bool pass = false;
  std::string error;  // non-empty when the task failed with an exception
};

struct TaskDef {
  const char* name;
  const char* cite;        // where the identity comes from
  int min_order;           // minimal metric jet order the task requests
  double default_tol;
  std::function<TaskResult(const TaskRequest&, TaskContext&)> run;
};

const std::vector<TaskDef>& task_catalog();
const TaskDef* find_task(const std::string& base_name);

/// Runs one task, capturing any exception into TaskResult::error.
TaskResult run_task(const TaskRequest& req, TaskContext& ctx);

/// Seeded interior sample points for pointwise checks (8% margin from the
/// box boundary).
std::vector<std::vector<double>> sample_points(const Chart& chart,
                                               std::uint64_t seed, int count);

}  // namespace curvlab
