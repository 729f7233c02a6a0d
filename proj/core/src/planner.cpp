#include "uavtw/planner.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "uavtw/error.hpp"

namespace uavtw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_cap(std::size_t k, std::size_t cap, const char* who) {
  if (k > cap) {
    throw Error(ErrorKind::kTooLarge, std::string(who) + ": " + std::to_string(k) +
                                          " users exceeds the cap of " +
                                          std::to_string(cap));
  }
}

FeasiblePathSet make_set(PlanMethod method) {
  FeasiblePathSet set;
  set.method = method;
  return set;
}

void push_tour(FeasiblePathSet& set, Tour tour, double total, bool feasible) {
  set.tours.push_back(std::move(tour));
  set.total_times.push_back(total);
  set.meets_deadlines.push_back(feasible);
}

// Tours of up to 15 users packed 4 bits per stop, first stop most significant,
// so integer order equals lexicographic tour order.
std::uint64_t pack(const std::vector<int>& order) {
  std::uint64_t key = 0;
  for (int u : order) key = (key << 4) | static_cast<std::uint64_t>(u);
  return key;
}

Tour unpack(std::uint64_t key, std::size_t k) {
  Tour t;
  t.order.resize(k);
  for (std::size_t i = k; i-- > 0;) {
    t.order[i] = static_cast<int>(key & 0xF);
    key >>= 4;
  }
  return t;
}

}  // namespace

std::string_view to_string(PlanMethod m) noexcept {
  switch (m) {
    case PlanMethod::kExhaustive: return "exhaustive";
    case PlanMethod::kHeuristic: return "heuristic";
    case PlanMethod::kDp: return "dp";
    case PlanMethod::kTsp: return "tsp";
  }
  return "unknown";
}

std::optional<PlanMethod> parse_plan_method(std::string_view name) noexcept {
  for (PlanMethod m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

TimeWindowInstance::TimeWindowInstance(SquareMatrix travel, std::vector<double> service,
                                       std::vector<double> deadlines)
    : travel_(std::move(travel)),
      service_(std::move(service)),
      deadlines_(std::move(deadlines)) {
  const std::size_t n = travel_.size();
  if (n < 2 || service_.size() != n || deadlines_.size() != n) {
    throw Error(ErrorKind::kInvalidArgument,
                "TimeWindowInstance: travel, service and deadlines must cover the "
                "depot and at least one user");
  }
  cost_ = SquareMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      cost_(j, k) = j == k ? kInf : travel_(j, k) + service_[k];
    }
  }
}

TimeWindowInstance make_instance(const Scenario& s, double speed) {
  if (!(speed > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "make_instance: speed must be positive");
  }
  const std::size_t n = s.node_count();
  SquareMatrix travel(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) travel(j, k) = s.distances()(j, k) / speed;
  }
  std::vector<double> service(s.service_times().begin(), s.service_times().end());
  std::vector<double> deadlines(n, kInf);
  for (std::size_t k = 1; k < n; ++k) deadlines[k] = s.deadline(k);
  return TimeWindowInstance(std::move(travel), std::move(service), std::move(deadlines));
}

TourTiming evaluate_tour(const TimeWindowInstance& inst, const Tour& tour) {
  check_tour(tour, inst.user_count());
  TourTiming timing;
  timing.feasible = true;
  timing.completion.reserve(tour.order.size());
  double now = 0.0;
  std::size_t prev = 0;
  for (int u : tour.order) {
    now += inst.cost(prev, u);
    timing.completion.push_back(now);
    if (now > inst.deadline(u)) timing.feasible = false;
    prev = static_cast<std::size_t>(u);
  }
  return timing;
}

FirstHopCheck check_first_hop_feasibility(const TimeWindowInstance& inst) {
  FirstHopCheck check;
  check.feasible = true;
  for (std::size_t k = 1; k <= inst.user_count(); ++k) {
    check.a.push_back(inst.cost(0, k));
    if (check.a.back() > inst.deadline(k)) check.feasible = false;
  }
  return check;
}

FeasiblePathSet exhaustive_search(const TimeWindowInstance& inst, const PlannerOptions& opts) {
  const std::size_t k = inst.user_count();
  require_cap(k, std::min<std::size_t>(opts.exhaustive_max_users, 15), "exhaustive_search");
  FeasiblePathSet set = make_set(PlanMethod::kExhaustive);
  if (!check_first_hop_feasibility(inst).feasible) return set;

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 1);
  std::vector<std::pair<double, std::uint64_t>> feasible;
  do {
    double now = 0.0;
    std::size_t prev = 0;
    bool ok = true;
    for (int u : order) {
      now += inst.cost(prev, u);
      if (now > inst.deadline(u)) {
        ok = false;
        break;
      }
      prev = static_cast<std::size_t>(u);
    }
    if (ok) feasible.emplace_back(now, pack(order));
  } while (std::next_permutation(order.begin(), order.end()));

  const std::size_t keep =
      opts.psi == 0 ? feasible.size() : std::min(opts.psi, feasible.size());
  std::partial_sort(feasible.begin(), feasible.begin() + static_cast<std::ptrdiff_t>(keep),
                    feasible.end());
  for (std::size_t i = 0; i < keep; ++i) {
    push_tour(set, unpack(feasible[i].second, k), feasible[i].first, true);
  }
  return set;
}

FeasiblePathSet heuristic_search(const TimeWindowInstance& inst) {
  const std::size_t k = inst.user_count();
  FeasiblePathSet set = make_set(PlanMethod::kHeuristic);
  if (!check_first_hop_feasibility(inst).feasible) return set;

  std::vector<bool> visited(k + 1, false);
  Tour tour;
  tour.order.reserve(k);
  double now = 0.0;
  std::size_t current = 0;
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t pick = 0;
    for (std::size_t cand = 1; cand <= k; ++cand) {
      if (visited[cand] || now + inst.cost(current, cand) > inst.deadline(cand)) continue;
      if (pick == 0 || inst.deadline(cand) < inst.deadline(pick) ||
          (inst.deadline(cand) == inst.deadline(pick) &&
           inst.cost(current, cand) < inst.cost(current, pick))) {
        pick = cand;
      }
    }
    if (pick == 0) return set;
    now += inst.cost(current, pick);
    visited[pick] = true;
    tour.order.push_back(static_cast<int>(pick));
    current = pick;
  }
  push_tour(set, std::move(tour), now, true);
  return set;
}

DpResult dp_solve(const TimeWindowInstance& inst, const PlannerOptions& opts) {
  const std::size_t k = inst.user_count();
  require_cap(k, std::min<std::size_t>(opts.dp_max_users, 31), "dp_search");
  DpResult result;
  result.paths = make_set(PlanMethod::kDp);
  if (!check_first_hop_feasibility(inst).feasible) return result;

  const std::size_t masks = std::size_t{1} << k;
  // cost[mask * k + j]: cheapest time to serve `mask` ending at user j+1.
  std::vector<double> cost(masks * k, kInf);
  std::vector<std::int8_t> parent(masks * k, -1);

  for (std::size_t j = 0; j < k; ++j) {
    const double c = inst.cost(0, j + 1);
    if (c <= inst.deadline(j + 1)) {
      cost[(std::size_t{1} << j) * k + j] = c;
      parent[(std::size_t{1} << j) * k + j] = 0;
    }
  }
  for (std::size_t mask = 1; mask < masks; ++mask) {
    for (std::size_t j = 0; j < k; ++j) {
      const double base = cost[mask * k + j];
      if (base == kInf) continue;
      for (std::size_t next = 0; next < k; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const double c = base + inst.cost(j + 1, next + 1);
        if (c > inst.deadline(next + 1)) continue;
        const std::size_t slot = (mask | (std::size_t{1} << next)) * k + next;
        if (c < cost[slot]) {
          cost[slot] = c;
          parent[slot] = static_cast<std::int8_t>(j + 1);
        }
      }
    }
  }

  for (std::size_t mask = 1; mask < masks; ++mask) {
    for (std::size_t j = 0; j < k; ++j) {
      if (cost[mask * k + j] == kInf) continue;
      result.states.push_back({static_cast<std::uint32_t>(mask), static_cast<int>(j + 1),
                               cost[mask * k + j], parent[mask * k + j]});
    }
  }
  std::stable_sort(result.states.begin(), result.states.end(),
                   [](const DpState& a, const DpState& b) {
                     return std::popcount(a.visited) < std::popcount(b.visited);
                   });

  const std::size_t full = masks - 1;
  std::vector<std::pair<double, Tour>> finals;
  for (std::size_t last = 0; last < k; ++last) {
    const double c = cost[full * k + last];
    if (c == kInf) continue;
    Tour tour;
    tour.order.resize(k);
    std::size_t mask = full;
    std::size_t at = last;
    for (std::size_t pos = k; pos-- > 0;) {
      tour.order[pos] = static_cast<int>(at + 1);
      const int prev = parent[mask * k + at];
      mask &= ~(std::size_t{1} << at);
      if (prev > 0) at = static_cast<std::size_t>(prev - 1);
    }
    finals.emplace_back(c, std::move(tour));
  }
  std::sort(finals.begin(), finals.end());
  for (auto& [c, tour] : finals) push_tour(result.paths, std::move(tour), c, true);
  return result;
}

FeasiblePathSet dp_search(const TimeWindowInstance& inst, const PlannerOptions& opts) {
  return dp_solve(inst, opts).paths;
}

double closed_tour_travel(const TimeWindowInstance& inst, const Tour& tour) {
  double total = 0.0;
  std::size_t prev = 0;
  for (int u : tour.order) {
    total += inst.travel(prev, u);
    prev = static_cast<std::size_t>(u);
  }
  return total + inst.travel(prev, 0);
}

FeasiblePathSet tsp_baseline(const TimeWindowInstance& inst, const PlannerOptions& opts) {
  const std::size_t k = inst.user_count();
  require_cap(k, std::min<std::size_t>(opts.tsp_max_users, 31), "tsp_baseline");
  FeasiblePathSet set = make_set(PlanMethod::kTsp);

  const std::size_t masks = std::size_t{1} << k;
  std::vector<double> len(masks * k, kInf);
  std::vector<std::int8_t> parent(masks * k, -1);
  for (std::size_t j = 0; j < k; ++j) {
    len[(std::size_t{1} << j) * k + j] = inst.travel(0, j + 1);
    parent[(std::size_t{1} << j) * k + j] = 0;
  }
  for (std::size_t mask = 1; mask < masks; ++mask) {
    for (std::size_t j = 0; j < k; ++j) {
      const double base = len[mask * k + j];
      if (base == kInf) continue;
      for (std::size_t next = 0; next < k; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const double c = base + inst.travel(j + 1, next + 1);
        const std::size_t slot = (mask | (std::size_t{1} << next)) * k + next;
        if (c < len[slot]) {
          len[slot] = c;
          parent[slot] = static_cast<std::int8_t>(j + 1);
        }
      }
    }
  }

  const std::size_t full = masks - 1;
  std::size_t best = 0;
  double best_len = kInf;
  for (std::size_t j = 0; j < k; ++j) {
    const double c = len[full * k + j] + inst.travel(j + 1, 0);
    if (c < best_len) {
      best_len = c;
      best = j;
    }
  }
  Tour tour;
  tour.order.resize(k);
  std::size_t mask = full;
  std::size_t at = best;
  for (std::size_t pos = k; pos-- > 0;) {
    tour.order[pos] = static_cast<int>(at + 1);
    const int prev = parent[mask * k + at];
    mask &= ~(std::size_t{1} << at);
    if (prev > 0) at = static_cast<std::size_t>(prev - 1);
  }
  const TourTiming timing = evaluate_tour(inst, tour);
  push_tour(set, std::move(tour), timing.completion.back(), timing.feasible);
  return set;
}

FeasiblePathSet run_planner(PlanMethod method, const TimeWindowInstance& inst,
                            const PlannerOptions& opts) {
  switch (method) {
    case PlanMethod::kExhaustive: return exhaustive_search(inst, opts);
    case PlanMethod::kHeuristic: return heuristic_search(inst);
    case PlanMethod::kDp: return dp_search(inst, opts);
    case PlanMethod::kTsp: return tsp_baseline(inst, opts);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown planning method");
}

}  // namespace uavtw
