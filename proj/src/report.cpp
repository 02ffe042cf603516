#include "curvlab/report.hpp"

#include <json.hpp>

#include "curvlab/version.hpp"

namespace curvlab {

std::string render_report(const TaskConfig& cfg,
                          const std::vector<TaskRecord>& records, bool pass) {
  nlohmann::ordered_json root;
  root["version"] = kVersion;
  root["config"] = {
      {"path", cfg.path},
      {"text", cfg.text},
      {"seed", cfg.seed},
      {"points", cfg.points},
  };
  nlohmann::ordered_json tasks = nlohmann::ordered_json::array();
  for (const auto& rec : records) {
    nlohmann::ordered_json t;
    t["name"] = rec.request.instance;
    t["cite"] = rec.cite;
    t["residual_max"] = rec.result.residual_max;
    t["residual_mean"] = rec.result.residual_mean;
    if (rec.result.normalization)
      t["normalization"] = *rec.result.normalization;
    else
      t["normalization"] = nullptr;
    t["ladder"] = rec.result.ladder;
    if (rec.result.fd_order)
      t["fd_order"] = *rec.result.fd_order;
    else
      t["fd_order"] = nullptr;
    t["tol"] = rec.result.tol;
    t["pass"] = rec.result.pass;
    t["seconds"] = rec.seconds;
    if (!rec.result.error.empty()) t["error"] = rec.result.error;
    tasks.push_back(std::move(t));
  }
  root["tasks"] = std::move(tasks);
  root["pass"] = pass;
  return root.dump(2) + "\n";
}

}  // namespace curvlab
