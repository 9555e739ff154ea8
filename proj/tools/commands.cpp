#include "commands.hpp"

#include <chrono>
#include <ctime>
#include <iostream>

#include <spdlog/spdlog.h>

#include "screenopt/assumptions.hpp"
#include "screenopt/gconvex.hpp"
#include "screenopt/io/config_io.hpp"
#include "screenopt/io/csv_io.hpp"
#include "screenopt/io/instance_io.hpp"
#include "screenopt/io/report_io.hpp"
#include "screenopt/oracle.hpp"
#include "screenopt/solver.hpp"

#ifndef SCREENOPT_VERSION
#define SCREENOPT_VERSION "unknown"
#endif

namespace screenopt::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class Run {
 public:
  Run(const CommonOptions& common, std::string subcommand)
      : common_(common), subcommand_(std::move(subcommand)), start_(std::chrono::steady_clock::now()) {
    fs::create_directories(common_.out);
  }

  void write(const std::string& name, const std::string& content) {
    io::write_atomic(common_.out / name, content);
    outputs_.push_back(name);
    spdlog::debug("wrote {}", (common_.out / name).string());
  }

  /// Written last so its presence marks a finished run.
  void finish(Json overrides, int exit_code) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    Json m;
    m["tool"] = "screenopt";
    m["version"] = SCREENOPT_VERSION;
    m["subcommand"] = subcommand_;
    m["instance"] = common_.instance.string();
    if (common_.config) m["config"] = common_.config->string();
    m["overrides"] = std::move(overrides);
    m["workers"] = common_.workers;
    m["output_dir"] = common_.out.string();
    m["outputs"] = outputs_;
    m["argv"] = common_.argv;
    m["exit_code"] = exit_code;
    m["started_at"] = stamp;
    m["wall_clock_seconds"] = secs;
    io::write_atomic(common_.out / "manifest.json", io::dump(m));
  }

 private:
  const CommonOptions& common_;
  std::string subcommand_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> outputs_;
};

io::RunConfig load_config(const CommonOptions& common) {
  io::RunConfig rc;
  if (common.config) rc = io::load_run_config(*common.config);
  if (common.seed) rc.solve.seed = *common.seed;
  return rc;
}

void write_solution(Run& run, const ProblemInstance& instance, const SolveReport& report) {
  run.write("menu.csv", io::menu_csv(report.best_menu, instance.product_dim()));
  run.write("allocation.csv", io::allocation_csv(instance, report.best_allocation));
  run.write("trace.csv", io::trace_csv(report.profit_trace));
  run.write("report.json", io::dump(io::to_json(report)));
}

std::string vec_text(ConstVec v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + io::format_real(v[i]);
  return s + ")";
}

}  // namespace

int cmd_validate(const CommonOptions& common, std::optional<std::size_t> samples) {
  const ProblemInstance instance = io::load_instance(common.instance);
  io::RunConfig rc = load_config(common);
  const std::size_t n = samples.value_or(rc.samples);
  const std::uint64_t seed = common.seed.value_or(0);
  if (n < 100) throw io::SchemaError("--samples", "must be at least 100");

  Executor executor(common.workers);
  Run run(common, "validate");
  const AssumptionReport report = validate_assumptions(instance, n, seed, executor);
  run.write("assumptions.json", io::dump(io::to_json(report)));

  for (const auto& c : report.checks) std::cout << "A" << c.id << "\t" << to_string(c.status) << "\t" << c.detail << "\n";
  const int code = report.all_pass() ? kOk : kFailure;
  run.finish({{"seed", seed}, {"samples", n}}, code);
  return code;
}

int cmd_solve(const CommonOptions& common, const SolveOptions& options) {
  const ProblemInstance instance = io::load_instance(common.instance);
  io::RunConfig rc = load_config(common);
  SolveConfig& config = rc.solve;
  if (options.menu_size) config.menu_size = *options.menu_size;
  if (options.restarts) config.restarts = *options.restarts;
  if (options.max_iters) config.max_iters = *options.max_iters;
  if (options.warm_start) {
    config.warm_start = io::parse_menu_csv(io::read_text(*options.warm_start), instance.product_dim());
    config.init_scheme = InitScheme::warm_start;
  }
  try {
    config.validate();
  } catch (const InvalidInstance& e) {
    throw io::SchemaError("solve", e.what());
  }

  Executor executor(common.workers);
  Run run(common, "solve");
  spdlog::info("solving: {} agents, menu size {}, {} restarts", instance.agent_count(), config.menu_size,
               config.restarts);
  const SolveReport report = solve(instance, config, executor);
  write_solution(run, instance, report);
  std::cout << "profit\t" << io::format_real(report.best_profit) << "\ntermination\t"
            << to_string(report.termination) << "\n";
  if (!report.boundary_hits.empty())
    spdlog::warn("{} menu item(s) sit on the product box or price cap", report.boundary_hits.size());
  Json overrides = io::to_json(config);
  if (options.warm_start) overrides["warm_start"] = options.warm_start->string();
  run.finish(std::move(overrides), kOk);
  return kOk;
}

int cmd_oracle(const CommonOptions& common, std::optional<std::size_t> max_menu_size) {
  const ProblemInstance instance = io::load_instance(common.instance);
  io::RunConfig rc = load_config(common);
  OracleConfig config = rc.oracle_for(instance);
  if (max_menu_size) config.max_menu_size = *max_menu_size;
  try {
    config.validate(instance);
  } catch (const InvalidInstance& e) {
    throw io::SchemaError("oracle", e.what());
  }

  Executor executor(common.workers);
  Run run(common, "oracle");
  spdlog::info("oracle: {} grid items, {} menus", config.item_count(instance), config.menu_count(instance));
  const SolveReport report = solve_bruteforce(instance, config, executor);
  write_solution(run, instance, report);
  std::cout << "profit\t" << io::format_real(report.best_profit) << "\n";
  run.finish(io::to_json(config), kOk);
  return kOk;
}

int cmd_check(const CommonOptions& common, const fs::path& menu_path) {
  const ProblemInstance instance = io::load_instance(common.instance);
  const auto input = io::parse_check_csv(io::read_text(menu_path), instance.agent_dim(), instance.product_dim());
  Executor executor(common.workers);

  Menu menu;
  Allocation allocation;
  UtilityProfile u;
  std::vector<Vec> candidates;
  Json rows = Json::array();
  bool ok = true;
  auto add = [&](const std::string& name, const std::string& status, const std::string& witness) {
    if (status == "fail") ok = false;
    rows.push_back({{"check", name}, {"status", status}, {"witness", witness}});
  };

  if (const Menu* m = std::get_if<Menu>(&input)) {
    menu = *m;
    try {
      validate_menu(instance, menu);
    } catch (const InvalidInstance& e) {
      throw io::SchemaError(menu_path.string(), e.what());
    }
    allocation = aggregate_profit(instance, menu, executor).allocation;
    u = g_envelope(instance, menu, executor);
    bool same = true;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < u.size() && same; ++i)
      if (u[i] != allocation[i].utility) {
        same = false;
        bad = i;
      }
    add("envelope", same ? "pass" : "fail", same ? "" : "agent " + std::to_string(bad));
    candidates = default_candidates(menu, allocation);
  } else {
    allocation = io::allocation_from_table(instance, std::get<io::AssignmentTable>(input));
    for (const auto& c : allocation.choices) u.push_back(c.utility);
    candidates = default_candidates(Menu{}, allocation);
    try {
      menu = menu_from_assignment(instance, allocation);
      add("implementable", "pass", "");
    } catch (const InconsistentPrice& e) {
      add("implementable", "fail", e.what());
    }
  }

  const auto ic = is_incentive_compatible(instance, allocation, executor);
  add("incentive_compatible", ic.compatible ? "pass" : "fail",
      ic.violating_pair ? "agent " + std::to_string(ic.violating_pair->first) + " prefers bundle of agent " +
                              std::to_string(ic.violating_pair->second) + " by " + io::format_real(ic.violation)
                        : "");

  const auto gc = is_g_convex(instance, u, candidates, executor);
  std::string empty;
  for (std::size_t k = 0; k < gc.empty_agents.size() && k < 10; ++k)
    empty += (k ? " " : "agents ") + std::to_string(gc.empty_agents[k]);
  add("g_convex", gc.convex ? "pass" : "fail", empty);

  // Monotonicity is only implied when G is nondecreasing in the agent type.
  const auto a3 = check_type_monotonicity(instance, 256, common.seed.value_or(0));
  if (a3.status == CheckStatus::fail) {
    add("nondecreasing", "not-applicable", "utility is not monotone in agent type (A3)");
  } else {
    try {
      const auto mono = is_nondecreasing(instance, u);
      add("nondecreasing", mono.nondecreasing ? "pass" : "fail",
          mono.witness ? "agents " + std::to_string(mono.witness->first) + " <= " +
                             std::to_string(mono.witness->second) + " by " + io::format_real(mono.violation)
                       : "");
    } catch (const UnorderedGrid&) {
      add("nondecreasing", "not-applicable", "no comparable agent pair");
    }
  }

  const auto part = participation_violations(instance, u);
  std::string pw;
  if (!part.empty()) {
    const std::size_t i = part.front();
    pw = "agent " + std::to_string(i) + " at x=" + vec_text(instance.agents().point(i)) + " gets u=" +
         io::format_real(u[i]) + " < reservation " + io::format_real(instance.reservation()[i]);
    if (part.size() > 1) pw += " (+" + std::to_string(part.size() - 1) + " more)";
  }
  add("participation", part.empty() ? "pass" : "fail", pw);

  Run run(common, "check");
  std::string table = "check,status,witness\n";
  for (const auto& r : rows) {
    std::string w = r["witness"].get<std::string>();
    for (char& ch : w)
      if (ch == ',') ch = ';';
    table += r["check"].get<std::string>() + "," + r["status"].get<std::string>() + "," + w + "\n";
    std::cout << r["check"].get<std::string>() << "\t" << r["status"].get<std::string>()
              << (w.empty() ? "" : "\t" + w) << "\n";
  }
  run.write("check.csv", table);
  run.write("check.json", io::dump({{"pass", ok}, {"checks", rows}}));
  const int code = ok ? kOk : kFailure;
  run.finish({{"menu", menu_path.string()}}, code);
  return code;
}

}  // namespace screenopt::cli
