#include "uavtw/scenario.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "uavtw/channel.hpp"
#include "uavtw/error.hpp"

namespace uavtw {
namespace {

bool in_area(const Point& p, double side) {
  return p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side;
}

void require_positive(std::vector<ValidationIssue>& out, const std::string& field,
                      double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    out.push_back({field, "must be a finite positive number, got " +
                              std::to_string(value)});
  }
}

}  // namespace

std::vector<ValidationIssue> validate(const ScenarioData& d) {
  std::vector<ValidationIssue> issues;
  if (d.users.empty()) issues.push_back({"users", "must contain at least one user"});

  if (d.area_side_m) {
    require_positive(issues, "area_m", *d.area_side_m);
    if (!in_area(d.depot, *d.area_side_m)) {
      issues.push_back({"depot", "lies outside the service area"});
    }
  }

  std::set<int> ids;
  for (std::size_t i = 0; i < d.users.size(); ++i) {
    const GroundUser& u = d.users[i];
    const std::string prefix = "users[" + std::to_string(i) + "] (id " +
                               std::to_string(u.id) + ").";
    if (!ids.insert(u.id).second) {
      issues.push_back({prefix + "id", "duplicate user id"});
    }
    require_positive(issues, prefix + "q_bits", u.data_bits);
    require_positive(issues, prefix + "eta_s", u.deadline_s);
    if (d.area_side_m && !in_area(u.position, *d.area_side_m)) {
      issues.push_back({prefix + "pos", "lies outside the service area"});
    }
  }

  const UavParams& v = d.uav;
  require_positive(issues, "uav.altitude_m", v.altitude_m);
  require_positive(issues, "uav.v_max", v.v_max);
  require_positive(issues, "uav.delta_v", v.delta_v);
  require_positive(issues, "uav.v_hover", v.v_hover);
  require_positive(issues, "uav.p_com_w", v.p_com_w);
  require_positive(issues, "uav.energy_budget_j", v.energy_budget_j);
  require_positive(issues, "uav.v_min", v.v_min);
  if (v.v_hover > v.v_max) issues.push_back({"uav.v_hover", "must not exceed v_max"});
  if (v.v_min >= v.v_max) issues.push_back({"uav.v_min", "must be below v_max"});

  const ChannelParams& c = d.channel;
  require_positive(issues, "channel.bandwidth_hz", c.bandwidth_hz);
  require_positive(issues, "channel.mu0", c.mu0);
  require_positive(issues, "channel.noise_w", c.noise_w);
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) {
    issues.push_back({"channel.epsilon", "must lie in (0, 1)"});
  }
  if (!(c.rician_g >= 0.0)) issues.push_back({"channel.rician_g", "must be >= 0"});
  if (!(c.pathloss_exp >= 2.0)) {
    issues.push_back({"channel.pathloss_exp", "must be >= 2"});
  }

  const PowerModelParams& p = d.power;
  require_positive(issues, "power.p0_w", p.p0_w);
  require_positive(issues, "power.p1_w", p.p1_w);
  require_positive(issues, "power.alpha1", p.alpha1);
  require_positive(issues, "power.alpha2", p.alpha2);
  require_positive(issues, "power.alpha3", p.alpha3);
  return issues;
}

Scenario::Scenario(ScenarioData data) : data_(std::move(data)) {
  const auto issues = validate(data_);
  if (!issues.empty()) {
    std::ostringstream msg;
    msg << "invalid scenario:";
    for (const auto& issue : issues) msg << "\n  " << issue.field << ": " << issue.message;
    throw Error(ErrorKind::kValidation, msg.str());
  }

  const std::size_t n = node_count();
  distances_ = SquareMatrix(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Point& pa = position(a);
      const Point& pb = position(b);
      distances_(a, b) = std::hypot(pa.x - pb.x, pa.y - pb.y);
    }
  }

  const double gain = snr_gain(data_.channel, data_.uav.p_com_w, data_.uav.altitude_m);
  rate_bps_ = approx_rate(data_.channel, gain);
  service_times_.assign(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    service_times_[k] = service_time(data_.users[k - 1], rate_bps_);
  }
}

const Point& Scenario::position(std::size_t node) const {
  if (node >= node_count()) {
    throw Error(ErrorKind::kInvalidArgument,
                "node index " + std::to_string(node) + " out of range");
  }
  return node == 0 ? data_.depot : data_.users[node - 1].position;
}

const GroundUser& Scenario::user(std::size_t node) const {
  if (node == 0 || node >= node_count()) {
    throw Error(ErrorKind::kInvalidArgument,
                "user index " + std::to_string(node) + " out of range");
  }
  return data_.users[node - 1];
}

double Scenario::deadline(std::size_t node) const { return user(node).deadline_s; }

double Scenario::hop_distance(std::size_t a, std::size_t b) const {
  if (a >= node_count() || b >= node_count()) {
    throw Error(ErrorKind::kInvalidArgument, "hop_distance: node index out of range");
  }
  return distances_(a, b);
}

double hop_distance(std::size_t a, std::size_t b, const Scenario& s) {
  return s.hop_distance(a, b);
}

SquareMatrix travel_time_matrix(const Scenario& s, double v) {
  if (!(v > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "travel_time_matrix: speed must be positive");
  }
  const std::size_t n = s.node_count();
  const auto tau = s.service_times();
  SquareMatrix a(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      a(j, k) = j == k ? std::numeric_limits<double>::infinity()
                       : s.distances()(j, k) / v + tau[k];
    }
  }
  return a;
}

void check_tour(const Tour& tour, std::size_t user_count) {
  if (tour.order.size() != user_count) {
    throw Error(ErrorKind::kInvalidArgument,
                "tour must visit each of the " + std::to_string(user_count) +
                    " users exactly once");
  }
  std::vector<bool> seen(user_count + 1, false);
  for (int u : tour.order) {
    if (u < 1 || static_cast<std::size_t>(u) > user_count || seen[u]) {
      throw Error(ErrorKind::kInvalidArgument,
                  "tour is not a permutation of 1.." + std::to_string(user_count));
    }
    seen[u] = true;
  }
}

std::vector<double> hop_lengths(const Tour& tour, const Scenario& s) {
  check_tour(tour, s.user_count());
  std::vector<double> d;
  d.reserve(tour.order.size() + 1);
  std::size_t prev = 0;
  for (int u : tour.order) {
    d.push_back(s.distances()(prev, u));
    prev = static_cast<std::size_t>(u);
  }
  d.push_back(s.distances()(prev, 0));
  return d;
}

std::vector<double> arrival_times(const Tour& tour, const VelocityProfile& profile,
                                  const Scenario& s) {
  const std::vector<double> d = hop_lengths(tour, s);
  if (profile.speeds.size() != d.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "arrival_times: profile needs " + std::to_string(d.size()) +
                    " speeds, got " + std::to_string(profile.speeds.size()));
  }
  const auto tau = s.service_times();
  std::vector<double> t;
  t.reserve(tour.order.size());
  double now = 0.0;
  for (std::size_t i = 0; i < tour.order.size(); ++i) {
    if (!(profile.speeds[i] > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "arrival_times: speeds must be positive");
    }
    now += d[i] / profile.speeds[i] + tau[tour.order[i]];
    t.push_back(now);
  }
  return t;
}

}  // namespace uavtw
