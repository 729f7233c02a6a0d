#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavtw/params.hpp"
#include "uavtw/planner.hpp"

namespace uavtw {

enum class SweepParameter { kNone, kVMax, kEtaMin, kArea, kEnergyBudget, kKUsers };

std::string_view to_string(SweepParameter p) noexcept;
/// Accepts "none", "v_max", "eta_min", "area", "energy_budget", "k_users".
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) noexcept;

/// Monte-Carlo experiment description. Users are dropped uniformly in the
/// square [0, area_m]^2 and deadlines drawn uniformly in [eta_min_s, eta_max_s].
struct ExperimentConfig {
  std::size_t trials = 1000;
  std::size_t k_users = 6;
  double area_m = 400.0;
  double eta_min_s = 22.0;
  double eta_max_s = 60.0;
  double data_bits = 10e6;
  /// Depot position for an area of depot_reference_area_m; scaled with area_m.
  Point depot{1.5, 398.0};
  double depot_reference_area_m = 400.0;

  SweepParameter sweep = SweepParameter::kNone;
  std::vector<double> sweep_values;

  std::uint64_t seed = 1;
  std::vector<PlanMethod> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  /// Tours forwarded by the exhaustive search; 0 = every feasible tour.
  std::size_t exhaustive_psi = 0;
  /// Replace uav.v_hover by the minimum-power speed for each trial.
  bool auto_v_hover = true;

  UavParams uav;
  ChannelParams channel;
  PowerModelParams power;

  /// Worker threads for independent trials (0 = hardware concurrency).
  std::size_t threads = 1;
};

/// Throws Error(kValidation) listing each problem.
void validate(const ExperimentConfig& cfg);

/// Config with one sweep value applied (the sweep itself is cleared).
ExperimentConfig apply_sweep_value(const ExperimentConfig& cfg, double value);

/// Named parameter sets following the simulation captions: "fig4".."fig11".
std::optional<ExperimentConfig> preset(std::string_view name);
std::vector<std::string> preset_names();

struct MethodOutcome {
  PlanMethod method = PlanMethod::kDp;
  bool success = false;
  double energy_j = 0.0;   // meaningful only on success
  double runtime_s = 0.0;  // planning + speed optimization, wall clock
  std::size_t candidate_tours = 0;
  std::size_t solver_failures = 0;
};

struct TrialOutcome {
  std::uint64_t seed = 0;
  std::vector<MethodOutcome> methods;  // in cfg.methods order
  std::string note;                    // non-empty when the trial itself failed
};

/// Seed of trial `index` derived from the master seed (splitmix64 mix).
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index);

/// One random topology solved by every configured method. Deterministic in
/// trial_seed apart from runtime_s. Failures inside the trial count as outage.
TrialOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t trial_seed);

struct OutageSummary {
  double infeasible_rate = 0.0;
  double epsilon = 0.0;
  /// 1 - (1 - epsilon)(1 - infeasible_rate), assuming independence.
  double combined = 0.0;
};

/// Throws kInvalidArgument unless both inputs lie in [0, 1].
OutageSummary combined_outage(double infeasible_rate, double epsilon);

struct TrialStats {
  PlanMethod method = PlanMethod::kDp;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t solver_failures = 0;
  OutageSummary outage;
  // NaN when no trial succeeded.
  double energy_mean_j = 0.0;
  double energy_min_j = 0.0;
  double energy_max_j = 0.0;
  double runtime_mean_s = 0.0;
};

/// Aggregates outcomes in index order, so results do not depend on scheduling.
std::vector<TrialStats> aggregate(const ExperimentConfig& cfg,
                                  const std::vector<TrialOutcome>& outcomes);

struct SweepPoint {
  double value = 0.0;
  std::vector<TrialOutcome> outcomes;
  std::vector<TrialStats> stats;
};

/// Runs cfg.trials trials per sweep value. Trial seeds do not depend on the
/// sweep value (common random numbers across the sweep).
std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg);

struct BenchRow {
  std::size_t k_users = 0;
  PlanMethod method = PlanMethod::kDp;
  std::size_t trials = 0;
  double mean_s = 0.0;
  double min_s = 0.0;
};

/// Mean planning time (path search only) per method and user count on random
/// topologies with non-binding deadlines, so every search runs to completion.
/// Single-threaded. kTooLarge when a K exceeds a method's cap.
std::vector<BenchRow> runtime_benchmark(const std::vector<std::size_t>& k_values,
                                        std::size_t trials, std::uint64_t seed,
                                        const std::vector<PlanMethod>& methods);

}  // namespace uavtw
