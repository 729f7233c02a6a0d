#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "uavtw/scenario.hpp"

namespace uavtw {

enum class PlanMethod { kExhaustive, kHeuristic, kDp, kTsp };

std::string_view to_string(PlanMethod m) noexcept;
/// Accepts "exhaustive", "heuristic", "dp", "tsp".
std::optional<PlanMethod> parse_plan_method(std::string_view name) noexcept;

inline constexpr PlanMethod kAllMethods[] = {PlanMethod::kExhaustive, PlanMethod::kHeuristic,
                                             PlanMethod::kDp, PlanMethod::kTsp};

/// Time-window routing instance: node 0 is the depot, 1..K the users.
///
/// cost(j, k) = travel(j, k) + service[k] is the time to fly j -> k and then
/// serve k. A tour is deadline-feasible when the running sum of costs along
/// 0 -> u_1 -> ... -> u_K never exceeds the deadline of the user just served.
class TimeWindowInstance {
 public:
  /// travel is (K+1)x(K+1); service and deadlines have K+1 entries with
  /// entry 0 (depot) ignored. Throws kInvalidArgument on size mismatch.
  TimeWindowInstance(SquareMatrix travel, std::vector<double> service,
                     std::vector<double> deadlines);

  std::size_t user_count() const noexcept { return travel_.size() - 1; }
  double travel(std::size_t j, std::size_t k) const { return travel_(j, k); }
  double cost(std::size_t j, std::size_t k) const { return cost_(j, k); }
  double deadline(std::size_t k) const { return deadlines_[k]; }
  double service(std::size_t k) const { return service_[k]; }
  const SquareMatrix& cost_matrix() const noexcept { return cost_; }

 private:
  SquareMatrix travel_;
  SquareMatrix cost_;
  std::vector<double> service_;
  std::vector<double> deadlines_;
};

/// Instance for flying every hop of `s` at constant `speed`.
TimeWindowInstance make_instance(const Scenario& s, double speed);

struct FeasiblePathSet {
  PlanMethod method = PlanMethod::kDp;
  std::vector<Tour> tours;
  /// Completion time of the last service along each tour, at the planning speed.
  std::vector<double> total_times;
  /// Deadline feasibility of each tour. Always true except for kTsp, which
  /// ignores deadlines while searching.
  std::vector<bool> meets_deadlines;

  bool empty() const noexcept { return tours.empty(); }
  std::size_t size() const noexcept { return tours.size(); }
};

struct TourTiming {
  std::vector<double> completion;  // T_1..T_K
  bool feasible = false;
};

/// Running completion times along `tour` and whether each meets its deadline.
TourTiming evaluate_tour(const TimeWindowInstance& inst, const Tour& tour);

struct FirstHopCheck {
  bool feasible = false;
  std::vector<double> a;  // a_{0k} for k = 1..K (index k-1)
};

/// Every user must be reachable directly from the depot in time; otherwise no
/// tour can be feasible (triangle inequality).
FirstHopCheck check_first_hop_feasibility(const TimeWindowInstance& inst);

struct PlannerOptions {
  /// Number of shortest feasible tours kept by the exhaustive search;
  /// 0 keeps every feasible tour.
  std::size_t psi = 0;
  std::size_t exhaustive_max_users = 10;
  std::size_t dp_max_users = 20;
  std::size_t tsp_max_users = 20;
};

/// Enumerates all K! tours and keeps the psi feasible ones with the smallest
/// completion time (ties: lexicographic tour order). kTooLarge above the cap.
FeasiblePathSet exhaustive_search(const TimeWindowInstance& inst,
                                  const PlannerOptions& opts = {});

/// Greedy construction: at each step, among unvisited users that can still be
/// served in time, take the one with the earliest deadline, then the smallest
/// hop cost, then the lowest index. Returns at most one tour.
FeasiblePathSet heuristic_search(const TimeWindowInstance& inst);

/// One retained dynamic-programming state (S, k).
struct DpState {
  std::uint32_t visited = 0;  // bit k-1 set when user k is in S
  int last = 0;               // user k
  double cost = 0.0;          // C(S, k)
  int parent = 0;             // user served before k; 0 for the depot
};

struct DpResult {
  FeasiblePathSet paths;
  /// All retained states ordered by (|S|, S, k).
  std::vector<DpState> states;
};

/// Forward subset DP over (S, k) states. A state survives only if its cost
/// meets the deadline of k, and only the cheapest state per (S, k) is kept
/// (first inserted wins ties). Each surviving full-set state is backtracked
/// into a tour, so at most K tours are returned. kTooLarge above the cap.
DpResult dp_solve(const TimeWindowInstance& inst, const PlannerOptions& opts = {});
FeasiblePathSet dp_search(const TimeWindowInstance& inst, const PlannerOptions& opts = {});

/// Shortest closed tour over travel times (Held-Karp), ignoring deadlines.
/// The single tour is flagged in meets_deadlines.
FeasiblePathSet tsp_baseline(const TimeWindowInstance& inst, const PlannerOptions& opts = {});

/// Closed-tour travel time 0 -> tour -> 0.
double closed_tour_travel(const TimeWindowInstance& inst, const Tour& tour);

FeasiblePathSet run_planner(PlanMethod method, const TimeWindowInstance& inst,
                            const PlannerOptions& opts = {});

}  // namespace uavtw
