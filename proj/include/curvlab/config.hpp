#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/quadrature.hpp"

namespace curvlab {

/// One requested task instance, e.g. "kw_sigma(k=2)".
struct TaskRequest {
  std::string instance;              // literal normalized name for the report
  std::string base;                  // catalog name
  std::map<std::string, double> params;
  std::optional<double> tol_override;

  int param_int(const std::string& key, int fallback) const;
  double param(const std::string& key, double fallback) const;
};

/// Parsed run configuration (flat sectioned key = value format).
struct TaskConfig {
  std::string path;
  std::string text;  // raw file contents, echoed into the report

  Chart chart;
  std::optional<VectorFieldSpec> field;
  std::optional<Expression> eta;
  std::vector<TaskRequest> tasks;
  QuadratureSpec quadrature;
  std::uint64_t seed = 20240101;
  int points = 8;
  double fd_step = 1e-3;
  std::vector<double> law_t = {0.3, 1.0};
  std::string output_path = "report.json";
};

TaskConfig parse_config(const std::string& text, const std::string& path);
TaskConfig load_config(const std::string& path);

}  // namespace curvlab
