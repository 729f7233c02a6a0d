#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "test_util.hpp"
#include "uavtw/error.hpp"
#include "uavtw/planner.hpp"

using namespace uavtw;

namespace {

struct Expected {
  std::uint32_t mask;
  int last;
  double cost;
};

}  // namespace

TEST(Dp, WorkedExampleStates) {
  const DpResult r = dp_solve(testutil::dp_example());
  const Expected expected[] = {{0b001, 1, 1.0}, {0b010, 2, 1.4}, {0b100, 3, 1.2},
                               {0b011, 2, 1.5}, {0b011, 1, 1.9}, {0b101, 3, 2.5},
                               {0b111, 3, 3.4}};
  for (const auto& e : expected) {
    const auto it = std::find_if(r.states.begin(), r.states.end(), [&](const DpState& s) {
      return s.visited == e.mask && s.last == e.last;
    });
    ASSERT_NE(it, r.states.end()) << "missing state " << e.mask << "/" << e.last;
    EXPECT_NEAR(it->cost, e.cost, 1e-12);
  }
  ASSERT_FALSE(r.paths.empty());
  EXPECT_EQ(r.paths.tours.front(), (Tour{{2, 1, 3}}));
  EXPECT_NEAR(r.paths.total_times.front(), 3.4, 1e-12);
  for (const auto& s : r.states) EXPECT_LE(s.cost, testutil::dp_example().deadline(s.last) + 1e-12);
}

TEST(Heuristic, WorkedExample) {
  const auto inst = testutil::heuristic_example();
  const FeasiblePathSet set = heuristic_search(inst);
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.tours[0], (Tour{{1, 2, 3}}));
  const TourTiming t = evaluate_tour(inst, set.tours[0]);
  ASSERT_EQ(t.completion.size(), 3u);
  EXPECT_NEAR(t.completion[0], 1.12, 1e-12);
  EXPECT_NEAR(t.completion[1], 1.74, 1e-12);
  EXPECT_NEAR(t.completion[2], 3.86, 1e-12);
  EXPECT_TRUE(t.feasible);
}

TEST(Planner, AgreesWithBruteForce) {
  std::mt19937_64 rng(11);
  int feasible_instances = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t k = 3 + trial % 5;
    const Scenario s(testutil::random_data(rng, k, 5.0, 5.0 + 12.0 * k, 30.0));
    const TimeWindowInstance inst = make_instance(s, 30.0);
    const oracle::Instance o = oracle::make_instance(s, 30.0);
    const oracle::BruteForce bf = oracle::brute_force(o.cost, o.travel, o.deadline);

    const FeasiblePathSet ex = exhaustive_search(inst);
    const FeasiblePathSet dp = dp_search(inst);
    const FeasiblePathSet he = heuristic_search(inst);
    const FeasiblePathSet ts = tsp_baseline(inst);

    std::set<std::vector<int>> all(bf.feasible.begin(), bf.feasible.end());
    std::set<std::vector<int>> got;
    for (const auto& t : ex.tours) got.insert(t.order);
    EXPECT_EQ(got, all);
    EXPECT_EQ(dp.empty(), bf.feasible.empty());
    if (!bf.feasible.empty()) {
      ++feasible_instances;
      EXPECT_NEAR(dp.total_times.front(), bf.best_time, 1e-9);
      EXPECT_NEAR(ex.total_times.front(), bf.best_time, 1e-9);
      for (const auto& t : dp.tours) EXPECT_TRUE(all.count(t.order));
    }
    for (const auto& t : he.tours) EXPECT_TRUE(all.count(t.order));
    ASSERT_EQ(ts.size(), 1u);
    EXPECT_NEAR(closed_tour_travel(inst, ts.tours[0]), bf.best_closed_travel, 1e-9);
    EXPECT_EQ(static_cast<bool>(ts.meets_deadlines[0]), all.count(ts.tours[0].order) > 0);
  }
  EXPECT_GT(feasible_instances, 10);
}

TEST(Planner, ExhaustivePsiKeepsShortest) {
  std::mt19937_64 rng(3);
  const Scenario s(testutil::random_data(rng, 5, 1e4, 1e4));
  const TimeWindowInstance inst = make_instance(s, 45.0);
  PlannerOptions opts;
  opts.psi = 4;
  const FeasiblePathSet few = exhaustive_search(inst, opts);
  const FeasiblePathSet all = exhaustive_search(inst);
  ASSERT_EQ(few.size(), 4u);
  ASSERT_EQ(all.size(), 120u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(few.tours[i], all.tours[i]);
  EXPECT_TRUE(std::is_sorted(all.total_times.begin(), all.total_times.end()));
}

TEST(Planner, FeasibleSetGrowsWithSpeed) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario s(testutil::random_data(rng, 5, 10.0, 60.0));
    const auto slow = exhaustive_search(make_instance(s, 30.0));
    const auto fast = exhaustive_search(make_instance(s, 33.0));
    std::set<Tour> fast_set(fast.tours.begin(), fast.tours.end());
    for (const auto& t : slow.tours) EXPECT_TRUE(fast_set.count(t));
    if (!slow.empty()) {
      EXPECT_FALSE(dp_search(make_instance(s, 33.0)).empty());
    }
  }
}

TEST(Planner, UnreachableFirstHopEmptiesEverySearch) {
  std::mt19937_64 rng(2);
  ScenarioData d = testutil::random_data(rng, 4, 100.0, 100.0);
  d.users[2].deadline_s = 0.05;  // cannot even finish its own service
  const Scenario s(d);
  const auto inst = make_instance(s, 45.0);
  EXPECT_FALSE(check_first_hop_feasibility(inst).feasible);
  EXPECT_TRUE(exhaustive_search(inst).empty());
  EXPECT_TRUE(dp_search(inst).empty());
  EXPECT_TRUE(heuristic_search(inst).empty());
  EXPECT_FALSE(tsp_baseline(inst).meets_deadlines.at(0));
}

TEST(Planner, SizeCaps) {
  std::mt19937_64 rng(1);
  const Scenario s11(testutil::random_data(rng, 11, 1e4, 1e4));
  try {
    exhaustive_search(make_instance(s11, 45.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooLarge);
  }
  const Scenario s21(testutil::random_data(rng, 21, 1e4, 1e4));
  EXPECT_THROW(dp_search(make_instance(s21, 45.0)), Error);
  EXPECT_THROW(tsp_baseline(make_instance(s21, 45.0)), Error);
  EXPECT_EQ(heuristic_search(make_instance(s21, 45.0)).size(), 1u);
}

TEST(Planner, MethodNames) {
  for (PlanMethod m : kAllMethods) EXPECT_EQ(parse_plan_method(to_string(m)), m);
  EXPECT_FALSE(parse_plan_method("warp"));
}
