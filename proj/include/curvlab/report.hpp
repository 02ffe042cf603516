#pragma once

#include <string>
#include <vector>

#include "curvlab/tasks.hpp"

namespace curvlab {

struct TaskRecord {
  TaskRequest request;
  TaskResult result;
  std::string cite;
  double seconds = 0.0;
};

/// JSON text of the verification report. Field names are part of the
/// external contract:
///   {version, config{path,text,seed,points}, tasks:[{name, cite,
///    residual_max, residual_mean, normalization, ladder, fd_order, tol,
///    pass, seconds}], pass}
/// `error` is added to a task record only when the task failed to run.
std::string render_report(const TaskConfig& cfg,
                          const std::vector<TaskRecord>& records, bool pass);

}  // namespace curvlab
