#include "command.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "uavtw/error.hpp"
#include "uavtw/experiment.hpp"

namespace uavtw::cli {
namespace {

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorKind::kUsage, msg); }

PlanMethod method_or_fail(const std::string& flag, const std::string& name) {
  if (auto m = parse_plan_method(name)) return *m;
  usage(flag + ": unknown method '" + name + "' (expected exhaustive, heuristic, dp or tsp)");
}

std::uint64_t parse_u64(const std::string& flag, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    usage(flag + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

}  // namespace

std::size_t effective_threads(std::size_t requested, const char* env_value) {
  std::size_t n = requested != 0 ? requested
                                  : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (env_value != nullptr && *env_value != '\0') {
    const std::uint64_t cap = parse_u64("UAV_TSPTW_THREADS", env_value);
    if (cap == 0) usage("UAV_TSPTW_THREADS: must be >= 1");
    n = std::min<std::size_t>(n, cap);
  }
  return n;
}

Command parse_and_validate(int argc, const char* const* argv) {
  CLI::App app{"Deadline-constrained UAV data-collection planner"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Command cmd;
  std::string method = "dp", methods, seed, tour;

  auto add_output = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("-o,--output", cmd.output, what + " (default: stdout)");
  };
  auto add_scenario = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("-s,--scenario", cmd.scenario_path, "Scenario JSON file");
    if (required) opt->required();
  };

  auto* plan = app.add_subcommand("plan", "Search tours and optimize speeds for one scenario");
  add_scenario(plan, true);
  plan->add_option("-m,--method", method, "exhaustive | heuristic | dp | tsp")->capture_default_str();
  plan->add_option("--psi", cmd.psi, "Tours kept by the exhaustive search (0 = all)");
  add_output(plan, "Plan JSON");

  auto* optimize = app.add_subcommand("optimize", "Optimize hop speeds along a given tour");
  add_scenario(optimize, true);
  optimize->add_option("--tour", tour, "Visiting order, e.g. 2,1,3")->required();
  add_output(optimize, "Report JSON");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo sweep");
  simulate->add_option("-c,--config", cmd.config_path, "Experiment config JSON");
  simulate->add_option("--preset", cmd.preset, "Named parameter set (fig4..fig11)");
  simulate->add_option("--trials", cmd.trials, "Override the trial count");
  simulate->add_option("--seed", seed, "Master seed, or 'auto'");
  simulate->add_option("--threads", cmd.threads, "Worker threads (0 = all cores)");
  simulate->add_option("--methods", methods, "Comma-separated subset of methods");
  simulate->add_option("--sidecar", cmd.sidecar_path,
                       "Provenance JSON (default: <output>.json when writing a file)");
  simulate->add_flag("--timing", cmd.timing, "Fill runtime_mean_s (makes output irreproducible)");
  add_output(simulate, "Sweep CSV");

  auto* bench = app.add_subcommand("bench", "Planner runtime versus number of users");
  bench->add_option("-k,--k", cmd.k_values, "User counts")->delimiter(',');
  bench->add_option("--trials", cmd.trials, "Topologies per K (default 5)");
  bench->add_option("--seed", seed, "Master seed, or 'auto'");
  bench->add_option("--methods", methods, "Comma-separated methods (default: all)");
  add_output(bench, "Bench CSV");

  auto* curve = app.add_subcommand("power-curve", "Tabulate propulsion power against speed");
  add_scenario(curve, false);
  curve->add_option("--from", cmd.v_from, "First speed, m/s")->capture_default_str();
  curve->add_option("--to", cmd.v_to, "Last speed, m/s")->capture_default_str();
  curve->add_option("--step", cmd.v_step, "Speed step, m/s")->capture_default_str();
  add_output(curve, "CSV");

  auto* validate = app.add_subcommand("validate", "Check a scenario file and report every issue");
  add_scenario(validate, true);
  add_output(validate, "Report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    throw HelpRequested{out.str()};
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    throw HelpRequested{out.str()};
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  if (plan->parsed()) {
    cmd.verb = Verb::kPlan;
    cmd.method = method_or_fail("--method", method);
  } else if (optimize->parsed()) {
    cmd.verb = Verb::kOptimize;
    std::stringstream ss(tour);
    for (std::string item; std::getline(ss, item, ',');) {
      const std::uint64_t v = parse_u64("--tour", item);
      if (v < 1 || v > 64) usage("--tour: user index out of range: '" + item + "'");
      cmd.tour.push_back(static_cast<int>(v));
    }
    if (cmd.tour.empty()) usage("--tour: empty tour");
  } else if (simulate->parsed()) {
    cmd.verb = Verb::kSimulate;
    if (cmd.config_path.empty() && cmd.preset.empty())
      usage("simulate: give --config, --preset or both");
    if (!cmd.preset.empty() && !preset(cmd.preset)) {
      std::string names;
      for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
      usage("--preset: unknown preset '" + cmd.preset + "' (expected one of " + names + ")");
    }
    if (cmd.trials && *cmd.trials == 0) usage("--trials: must be >= 1");
  } else if (bench->parsed()) {
    cmd.verb = Verb::kBench;
    if (cmd.k_values.empty()) usage("--k: no user counts given");
    for (std::size_t k : cmd.k_values)
      if (k < 1) usage("--k: user counts must be >= 1");
    if (cmd.trials && *cmd.trials == 0) usage("--trials: must be >= 1");
  } else if (curve->parsed()) {
    cmd.verb = Verb::kPowerCurve;
    if (!(cmd.v_step > 0.0) || !(cmd.v_from >= 0.0) || !(cmd.v_to >= cmd.v_from) ||
        !std::isfinite(cmd.v_to))
      usage("power-curve: need 0 <= --from <= --to and --step > 0");
    if ((cmd.v_to - cmd.v_from) / cmd.v_step > 1e6) usage("--step: more than 1e6 rows");
  } else {
    cmd.verb = Verb::kValidate;
  }

  if (!methods.empty()) {
    std::stringstream ss(methods);
    for (std::string item; std::getline(ss, item, ',');)
      cmd.methods.push_back(method_or_fail("--methods", item));
  }
  if (!seed.empty()) {
    if (seed == "auto") {
      cmd.seed_auto = true;
    } else {
      cmd.seed = parse_u64("--seed", seed);
    }
  }
  return cmd;
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInfeasibleInput: return 1;
    case ErrorKind::kNumericFailure:
    case ErrorKind::kInfeasibleRicianRegime: return 3;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kTooLarge:
    case ErrorKind::kParse:
    case ErrorKind::kValidation:
    case ErrorKind::kIo:
    case ErrorKind::kUsage: return 2;
  }
  return 2;
}

}  // namespace uavtw::cli
