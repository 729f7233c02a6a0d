#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "uavtw/energy.hpp"
#include "uavtw/error.hpp"
#include "uavtw/planner.hpp"
#include "uavtw/scenario.hpp"

namespace uavtw {

/// Per-hop speed problem for one fixed tour: minimize the sum of hop fly
/// energies subject to cumulative deadlines, a speed box and a bound on the
/// speed change between consecutive hops.
struct VelocityProblem {
  std::vector<double> distances;  // K + 1 hops
  std::vector<double> service;    // tau of the user reached by hop i, K entries
  std::vector<double> deadlines;  // deadline of the user reached by hop i, K entries
  double v_min = 0.1;
  double v_max = 45.0;
  double delta_v = 45.0;
  PowerModelParams power;
};

VelocityProblem make_velocity_problem(const Tour& tour, const Scenario& s);

struct ObjectiveEval {
  double value = 0.0;
  std::vector<double> gradient;
};

/// Sum of E_fly over hops and its analytic gradient. Hops with zero length
/// contribute nothing.
ObjectiveEval objective_and_gradient(std::span<const double> speeds,
                                     std::span<const double> distances,
                                     const PowerModelParams& p);

struct OptimizationReport {
  VelocityProfile profile;
  std::vector<double> arrival_times;
  /// fly_j is the optimized objective; hover and comm depend only on the users.
  EnergyBreakdown energy;
  int iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
};

/// Raised when the barrier iterations stop above the KKT tolerance; carries
/// the best (feasible) iterate.
class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& message, OptimizationReport best)
      : Error(ErrorKind::kNumericFailure, message), best_(std::move(best)) {}
  const OptimizationReport& best() const noexcept { return best_; }

 private:
  OptimizationReport best_;
};

struct VelocityOptions {
  double mu_start = 1.0;
  double mu_end = 1e-8;
  double mu_factor = 0.1;
  int max_newton_per_stage = 200;
  double kkt_tolerance = 1e-6;
};

/// Convex per-hop speed optimization by a log-barrier interior-point method.
///
/// Throws kInfeasibleInput if flying every hop at v_max misses a deadline, and
/// OptimizationError if the KKT residual stays above tolerance.
OptimizationReport optimize_velocities(const VelocityProblem& problem,
                                       const VelocityOptions& opts = {});
OptimizationReport optimize_velocities(const Tour& tour, const Scenario& s,
                                       const VelocityOptions& opts = {});

struct PlanResult {
  Tour tour;
  OptimizationReport report;
  /// Completion time of the last service at v_max (tie-breaker).
  double total_time_at_vmax = 0.0;

  double total_energy_j() const noexcept { return report.energy.total_j; }
};

struct PlanSelection {
  std::optional<PlanResult> best;  // empty: outage
  std::size_t optimized = 0;       // tours actually solved
  std::size_t pruned = 0;          // skipped by the energy lower bound
  std::size_t over_budget = 0;
  std::size_t failures = 0;        // numeric failures or infeasible inputs
};

/// Optimizes the speeds of every deadline-feasible tour in `set` and returns
/// the lowest-energy plan within the energy budget (ties: shorter total time,
/// then lexicographic tour). Tours whose distance-based energy lower bound
/// already exceeds the incumbent are skipped; the result is the same.
PlanSelection pick_best_plan(const FeasiblePathSet& set, const Scenario& s,
                             const VelocityOptions& opts = {});

}  // namespace uavtw
