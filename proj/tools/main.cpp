#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "screenopt/errors.hpp"
#include "screenopt/io/instance_io.hpp"

using namespace screenopt;

namespace {

bool setup_logging() {
  auto logger = spdlog::stderr_logger_st("screenopt");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  const char* env = std::getenv("SCREENOPT_LOG");
  if (!env || !*env) return true;
  const std::string v = env;
  if (v == "error") spdlog::set_level(spdlog::level::err);
  else if (v == "warn") spdlog::set_level(spdlog::level::warn);
  else if (v == "info") spdlog::set_level(spdlog::level::info);
  else if (v == "debug") spdlog::set_level(spdlog::level::debug);
  else {
    std::cerr << "SCREENOPT_LOG must be one of error, warn, info, debug (got '" << v << "')\n";
    return false;
  }
  return true;
}

void add_common(CLI::App* cmd, cli::CommonOptions& common) {
  cmd->add_option("instance", common.instance, "Instance file (YAML)")->required();
  cmd->add_option("--seed", common.seed, "Random seed");
  cmd->add_option("--out", common.out, "Output directory")->capture_default_str();
  cmd->add_option("--workers", common.workers, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  cmd->add_option("--config", common.config, "Run configuration (YAML)");
}

}  // namespace

int main(int argc, char** argv) {
  if (!setup_logging()) return cli::kUsage;

  CLI::App app{"Solver and checker for discretized multidimensional screening"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SCREENOPT_VERSION);

  cli::CommonOptions common;
  for (int i = 0; i < argc; ++i) common.argv.emplace_back(argv[i]);

  auto* validate = app.add_subcommand("validate", "Sample-check the standing assumptions");
  add_common(validate, common);
  std::optional<std::size_t> samples;
  validate->add_option("--samples", samples, "Samples per check (>= 100)");

  auto* solve = app.add_subcommand("solve", "Optimize the price menu");
  add_common(solve, common);
  cli::SolveOptions solve_opts;
  solve->add_option("--menu-size", solve_opts.menu_size, "Items besides the outside option");
  solve->add_option("--restarts", solve_opts.restarts, "Independent restarts");
  solve->add_option("--max-iters", solve_opts.max_iters, "Poll sweeps per restart");
  solve->add_option("--warm-start", solve_opts.warm_start, "Menu CSV to start from")->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle", "Enumerate every small menu on a grid");
  add_common(oracle, common);
  std::optional<std::size_t> max_menu_size;
  oracle->add_option("--max-menu-size", max_menu_size, "Largest menu size (<= 3)");

  auto* check = app.add_subcommand("check", "Check a menu or allocation for IC, participation and G-convexity");
  add_common(check, common);
  std::filesystem::path menu_path;
  check->add_option("menu", menu_path, "Menu or allocation CSV")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    if (*validate) return cli::cmd_validate(common, samples);
    if (*solve) return cli::cmd_solve(common, solve_opts);
    if (*oracle) return cli::cmd_oracle(common, max_menu_size);
    if (*check) return cli::cmd_check(common, menu_path);
  } catch (const io::SchemaError& e) {
    spdlog::error("{}", e.what());
    return cli::kUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return cli::kFailure;
  }
  return cli::kUsage;
}
