#include "curvlab/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "curvlab/parallel.hpp"

namespace curvlab {

RunOutcome run_config(TaskConfig cfg, const RunOptions& options) {
  if (options.seed_override) cfg.seed = *options.seed_override;
  if (!options.out_override.empty()) cfg.output_path = options.out_override;

  for (const auto& req : cfg.tasks)
    if (!find_task(req.base)) throw ConfigError("unknown task '" + req.base + "'");

  TaskContext ctx;
  ctx.cfg = &cfg;
  ctx.threads = resolve_threads(options.threads);
  ctx.points = sample_points(cfg.chart, cfg.seed, cfg.points);

  std::vector<TaskRecord> records;
  bool all_pass = true;
  for (const auto& req : cfg.tasks) {
    const TaskDef* def = find_task(req.base);
    auto start = std::chrono::steady_clock::now();
    TaskResult result = run_task(req, ctx);
    auto stop = std::chrono::steady_clock::now();
    TaskRecord rec;
    rec.request = req;
    rec.result = result;
    rec.cite = def ? def->cite : "";
    rec.seconds = std::chrono::duration<double>(stop - start).count();
    all_pass = all_pass && result.pass;
    if (!options.quiet) {
      if (result.error.empty())
        std::printf("[%s] %-28s residual_max=%.3e tol=%.1e (%.2fs)\n",
                    result.pass ? "PASS" : "FAIL", req.instance.c_str(),
                    result.residual_max, result.tol, rec.seconds);
      else
        std::printf("[FAIL] %-28s error: %s\n", req.instance.c_str(),
                    result.error.c_str());
    }
    records.push_back(std::move(rec));
  }

  RunOutcome out;
  out.pass = all_pass;
  out.report_json = render_report(cfg, records, all_pass);
  out.out_path = cfg.output_path;
  if (!cfg.output_path.empty()) {
    std::ofstream f(cfg.output_path);
    if (!f) throw Error("cannot write report to '" + cfg.output_path + "'");
    f << out.report_json;
  }
  if (!options.quiet)
    std::printf("%s (%zu tasks, report: %s)\n", all_pass ? "PASS" : "FAIL",
                records.size(), cfg.output_path.c_str());
  return out;
}

std::string list_tasks_text() {
  std::ostringstream out;
  for (const auto& t : task_catalog()) {
    out << t.name << " -> " << t.cite << " (min jet order " << t.min_order
        << ", default tol " << t.default_tol << ")\n";
  }
  out << task_catalog().size() << " tasks registered\n";
  return out.str();
}

}  // namespace curvlab
