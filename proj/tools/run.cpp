#include <chrono>
#include <cstdlib>
#include <ostream>
#include <random>

#include "command.hpp"
#include "uavtw/error.hpp"
#include "uavtw/experiment.hpp"
#include "uavtw/io.hpp"
#include "uavtw/planner.hpp"
#include "uavtw/scenario.hpp"
#include "uavtw/velocity.hpp"

namespace uavtw::cli {
namespace {

Scenario load_scenario(const std::string& path) {
  return Scenario(io::parse_scenario(io::read_text_file(path)));
}

std::uint64_t resolve_seed(const Command& cmd, std::uint64_t fallback, std::ostream& err) {
  std::uint64_t seed = fallback;
  if (cmd.seed) seed = *cmd.seed;
  if (cmd.seed_auto) {
    std::random_device rd;
    const auto now = static_cast<std::uint64_t>(
        std::chrono::system_clock::now().time_since_epoch().count());
    seed = (static_cast<std::uint64_t>(rd()) << 32 ^ rd()) ^ now;
  }
  err << "seed: " << seed << '\n';
  return seed;
}

int run_plan(const Command& cmd) {
  const Scenario s = load_scenario(cmd.scenario_path);
  const TimeWindowInstance inst = make_instance(s, s.uav().v_max);
  PlannerOptions opts;
  opts.psi = cmd.psi;
  const FeasiblePathSet set = run_planner(cmd.method, inst, opts);
  const PlanSelection sel = pick_best_plan(set, s);
  io::write_text(cmd.output, io::emit_plan(s, set, sel));
  return sel.best ? 0 : 1;
}

int run_optimize(const Command& cmd, std::ostream& err) {
  const Scenario s = load_scenario(cmd.scenario_path);
  const Tour tour{cmd.tour};
  check_tour(tour, s.user_count());
  try {
    const OptimizationReport r = optimize_velocities(tour, s);
    io::write_text(cmd.output, io::emit_optimization(tour, r));
    if (r.energy.total_j > s.uav().energy_budget_j) {
      err << "energy " << r.energy.total_j << " J exceeds the budget\n";
      return 1;
    }
    return 0;
  } catch (const OptimizationError& e) {
    io::write_text(cmd.output, io::emit_optimization(tour, e.best()));
    throw;
  }
}

int run_simulate(const Command& cmd, std::ostream& err) {
  ExperimentConfig cfg = cmd.preset.empty() ? ExperimentConfig{} : *preset(cmd.preset);
  if (!cmd.config_path.empty())
    cfg = io::parse_experiment_config(io::read_text_file(cmd.config_path), cfg);
  if (cmd.trials) cfg.trials = *cmd.trials;
  if (!cmd.methods.empty()) cfg.methods = cmd.methods;
  cfg.seed = resolve_seed(cmd, cfg.seed, err);
  cfg.threads = effective_threads(cmd.threads, std::getenv("UAV_TSPTW_THREADS"));

  const std::vector<SweepPoint> points = run_sweep(cfg);
  io::write_text(cmd.output, io::emit_sweep_csv(points, cmd.timing));
  std::string sidecar = cmd.sidecar_path;
  if (sidecar.empty() && cmd.output != "-") sidecar = cmd.output + ".json";
  if (!sidecar.empty()) io::write_text(sidecar, io::emit_sweep_sidecar(cfg, points));

  std::size_t noted = 0;
  for (const auto& p : points)
    for (const auto& t : p.outcomes) noted += t.note.empty() ? 0 : 1;
  if (noted > 0) err << noted << " trial(s) recorded failures; see the sidecar\n";
  return 0;
}

int run_bench(const Command& cmd, std::ostream& err) {
  std::vector<PlanMethod> methods = cmd.methods;
  if (methods.empty()) methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
  const std::uint64_t seed = resolve_seed(cmd, 1, err);
  const auto rows = runtime_benchmark(cmd.k_values, cmd.trials.value_or(5), seed, methods);
  io::write_text(cmd.output, io::emit_bench_csv(rows));
  return 0;
}

int run_power_curve(const Command& cmd) {
  PowerModelParams p;
  if (!cmd.scenario_path.empty()) p = io::parse_scenario(io::read_text_file(cmd.scenario_path)).power;
  std::vector<double> speeds;
  const auto n = static_cast<std::size_t>((cmd.v_to - cmd.v_from) / cmd.v_step + 1e-9);
  for (std::size_t i = 0; i <= n; ++i) speeds.push_back(cmd.v_from + static_cast<double>(i) * cmd.v_step);
  io::write_text(cmd.output, io::emit_power_curve_csv(speeds, p));
  return 0;
}

int run_validate(const Command& cmd, std::ostream& err) {
  const ScenarioData data = io::parse_scenario(io::read_text_file(cmd.scenario_path));
  std::vector<ValidationIssue> issues = validate(data);
  if (issues.empty()) {
    try {
      (void)Scenario(data);
    } catch (const Error& e) {
      issues.push_back({"channel", e.what()});
    }
  }
  io::write_text(cmd.output, io::emit_validation_report(issues));
  for (const auto& i : issues) err << i.field << ": " << i.message << '\n';
  return issues.empty() ? 0 : 2;
}

}  // namespace

int run_command(const Command& cmd, std::ostream& err) {
  switch (cmd.verb) {
    case Verb::kPlan: return run_plan(cmd);
    case Verb::kOptimize: return run_optimize(cmd, err);
    case Verb::kSimulate: return run_simulate(cmd, err);
    case Verb::kBench: return run_bench(cmd, err);
    case Verb::kPowerCurve: return run_power_curve(cmd);
    case Verb::kValidate: return run_validate(cmd, err);
  }
  return 2;
}

}  // namespace uavtw::cli
