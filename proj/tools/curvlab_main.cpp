#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "curvlab/kernels.hpp"
#include "curvlab/runner.hpp"
#include "curvlab/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"curvlab - curvature identity verification laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  curvlab::RunOptions options;
  std::uint64_t seed = 0;
  bool seed_set = false;

  CLI::App* run = app.add_subcommand("run", "run a verification config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--threads", options.threads, "worker threads (0 = auto)");
  run->add_option("--out", options.out_override, "report path override");
  auto* seed_opt = run->add_option("--seed", seed, "sample-point seed override");

  CLI::App* list = app.add_subcommand("list-tasks", "print the task catalog");
  CLI::App* version = app.add_subcommand("version", "print version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      seed_set = seed_opt->count() > 0;
      if (seed_set) options.seed_override = seed;
      curvlab::TaskConfig cfg = curvlab::load_config(config_path);
      curvlab::RunOutcome outcome = curvlab::run_config(std::move(cfg), options);
      return outcome.pass ? 0 : 1;
    }
    if (list->parsed()) {
      std::fputs(curvlab::list_tasks_text().c_str(), stdout);
      return 0;
    }
    if (version->parsed()) {
      std::printf("curvlab %s (kernels: %s)\n", curvlab::kVersion,
                  curvlab::kernels::active().name);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
