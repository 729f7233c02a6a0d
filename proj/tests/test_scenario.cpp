#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "uavtw/error.hpp"
#include "uavtw/scenario.hpp"

using namespace uavtw;

namespace {

ScenarioData three_users() {
  ScenarioData d;
  d.depot = {0, 0};
  d.users = {{1, {300, 400}, 10e6, 40}, {2, {300, 0}, 10e6, 60}, {3, {0, 400}, 10e6, 80}};
  return d;
}

bool has_field(const std::vector<ValidationIssue>& issues, const std::string& field) {
  for (const auto& i : issues)
    if (i.field == field) return true;
  return false;
}

}  // namespace

TEST(Validate, ListsEveryIssueWithUserId) {
  ScenarioData d = three_users();
  d.users[0].deadline_s = -1;
  d.users[2].data_bits = 0;
  d.uav.v_max = -3;
  const auto issues = validate(d);
  EXPECT_TRUE(has_field(issues, "users[0] (id 1).eta_s"));
  EXPECT_TRUE(has_field(issues, "users[2] (id 3).q_bits"));
  EXPECT_TRUE(has_field(issues, "uav.v_max"));
  EXPECT_TRUE(validate(three_users()).empty());
}

TEST(Validate, AreaAndDuplicates) {
  ScenarioData d = three_users();
  d.area_side_m = 350.0;
  d.users[1].id = 1;
  const auto issues = validate(d);
  EXPECT_TRUE(has_field(issues, "users[0] (id 1).pos"));
  EXPECT_TRUE(has_field(issues, "users[1] (id 1).id"));
}

TEST(Scenario, ConstructorRejectsInvalidData) {
  ScenarioData d = three_users();
  d.users[1].deadline_s = std::nan("");
  try {
    Scenario s(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("users[1] (id 2).eta_s"), std::string::npos);
  }
  EXPECT_THROW(Scenario(ScenarioData{}), Error);
}

TEST(Scenario, DistancesAndServiceTimes) {
  const Scenario s(three_users());
  EXPECT_DOUBLE_EQ(s.hop_distance(0, 1), 500.0);
  EXPECT_DOUBLE_EQ(s.hop_distance(1, 2), 400.0);
  EXPECT_DOUBLE_EQ(hop_distance(2, 1, s), s.hop_distance(1, 2));
  EXPECT_EQ(s.hop_distance(3, 3), 0.0);
  EXPECT_THROW(s.hop_distance(0, 4), Error);
  ASSERT_EQ(s.service_times().size(), 4u);
  EXPECT_EQ(s.service_times()[0], 0.0);
  EXPECT_NEAR(s.service_times()[1], 10e6 / s.rate_bps(), 1e-15);
}

TEST(Scenario, TravelTimeMatrix) {
  const Scenario s(three_users());
  const SquareMatrix a = travel_time_matrix(s, 10.0);
  EXPECT_TRUE(std::isinf(a(2, 2)));
  EXPECT_NEAR(a(0, 1), 50.0 + s.service_times()[1], 1e-12);
  EXPECT_THROW(travel_time_matrix(s, 0.0), Error);
}

TEST(Scenario, ArrivalTimes) {
  const Scenario s(three_users());
  const Tour t{{2, 1, 3}};
  const auto tau = s.service_times();
  const auto times = arrival_times(t, VelocityProfile{{10, 20, 30, 40}}, s);
  ASSERT_EQ(times.size(), 3u);
  EXPECT_NEAR(times[0], 30.0 + tau[2], 1e-12);
  EXPECT_NEAR(times[1], times[0] + 20.0 + tau[1], 1e-12);
  EXPECT_NEAR(times[2], times[1] + 10.0 + tau[3], 1e-12);
  EXPECT_THROW(arrival_times(t, VelocityProfile{{10, 20, 30}}, s), Error);
  EXPECT_THROW(arrival_times(t, VelocityProfile{{10, 0, 30, 40}}, s), Error);
  const auto hops = hop_lengths(t, s);
  EXPECT_EQ(hops, (std::vector<double>{300, 400, 300, 400}));
}

TEST(Scenario, CheckTour) {
  EXPECT_NO_THROW(check_tour(Tour{{3, 1, 2}}, 3));
  EXPECT_THROW(check_tour(Tour{{1, 1, 2}}, 3), Error);
  EXPECT_THROW(check_tour(Tour{{1, 2}}, 3), Error);
  EXPECT_THROW(check_tour(Tour{{0, 1, 2}}, 3), Error);
}
