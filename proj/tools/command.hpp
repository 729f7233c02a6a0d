#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uavtw/error.hpp"
#include "uavtw/planner.hpp"

namespace uavtw::cli {

enum class Verb { kPlan, kOptimize, kSimulate, kBench, kPowerCurve, kValidate };

struct Command {
  Verb verb = Verb::kPlan;
  std::string scenario_path;
  std::string config_path;
  std::string preset;
  std::string output = "-";
  std::string sidecar_path;

  PlanMethod method = PlanMethod::kDp;
  std::vector<PlanMethod> methods;  // empty: command default
  std::size_t psi = 0;
  std::vector<int> tour;

  std::optional<std::uint64_t> seed;  // unset: config value
  bool seed_auto = false;
  std::optional<std::size_t> trials;
  std::size_t threads = 0;  // 0: hardware concurrency
  bool timing = false;

  std::vector<std::size_t> k_values{3, 4, 5, 6, 7, 8};
  double v_from = 0.0;
  double v_to = 60.0;
  double v_step = 1.0;
};

/// --help was given; text is the usage message.
struct HelpRequested {
  std::string text;
};

/// Parses argv (including argv[0]). Throws Error(kUsage) naming the offending
/// flag or value, or HelpRequested.
Command parse_and_validate(int argc, const char* const* argv);

/// Worker count: the requested count (hardware concurrency when 0) capped by
/// UAV_TSPTW_THREADS when set. Throws kUsage for a malformed variable.
std::size_t effective_threads(std::size_t requested, const char* env_value);

/// Executes the command and returns the process exit code. Diagnostics go to `err`.
int run_command(const Command& cmd, std::ostream& err);

/// 0 success, 1 outage-only, 2 usage/validation/input, 3 numeric failure.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace uavtw::cli
