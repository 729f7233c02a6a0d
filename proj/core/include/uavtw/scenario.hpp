#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavtw/params.hpp"

namespace uavtw {

/// Dense row-major square matrix; small (K+1 <= 21) so a flat vector is fine.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Visiting order of user node indices (1..K); the depot endpoints are implied.
struct Tour {
  std::vector<int> order;

  friend bool operator==(const Tour&, const Tour&) = default;
  friend auto operator<=>(const Tour&, const Tour&) = default;
};

/// One speed per hop: K + 1 entries for K users.
struct VelocityProfile {
  std::vector<double> speeds;
};

/// Everything needed to describe one problem instance, before validation.
struct ScenarioData {
  Point depot;
  std::vector<GroundUser> users;
  UavParams uav;
  ChannelParams channel;
  PowerModelParams power;
  // Side of the square service area [0, side]^2; bounds are checked only when set.
  std::optional<double> area_side_m;
};

struct ValidationIssue {
  std::string field;  // e.g. "users[2].eta_s"
  std::string message;
};

/// Lists every invariant violation; empty means the data is valid.
std::vector<ValidationIssue> validate(const ScenarioData& data);

/// Immutable, validated problem instance. Node 0 is the depot, nodes 1..K the
/// users in file order. Distances and per-user service times are computed once
/// at construction.
class Scenario {
 public:
  /// Throws Error(kValidation) listing every violated invariant.
  explicit Scenario(ScenarioData data);

  const ScenarioData& data() const noexcept { return data_; }
  const UavParams& uav() const noexcept { return data_.uav; }
  const ChannelParams& channel() const noexcept { return data_.channel; }
  const PowerModelParams& power() const noexcept { return data_.power; }

  std::size_t user_count() const noexcept { return data_.users.size(); }
  std::size_t node_count() const noexcept { return data_.users.size() + 1; }

  const Point& position(std::size_t node) const;
  /// node in 1..K.
  const GroundUser& user(std::size_t node) const;
  double deadline(std::size_t node) const;

  /// Euclidean hop length in meters. Throws kInvalidArgument on a bad index.
  double hop_distance(std::size_t a, std::size_t b) const;
  const SquareMatrix& distances() const noexcept { return distances_; }

  /// Outage-constrained rate shared by all users (same altitude and channel).
  double rate_bps() const noexcept { return rate_bps_; }
  /// tau_k indexed by node; entry 0 (depot) is zero.
  std::span<const double> service_times() const noexcept { return service_times_; }

 private:
  ScenarioData data_;
  SquareMatrix distances_;
  double rate_bps_ = 0.0;
  std::vector<double> service_times_;
};

/// Free-function form of Scenario::hop_distance.
double hop_distance(std::size_t a, std::size_t b, const Scenario& s);

/// a_jk = hop_distance(j, k) / v + tau_k for j != k; the diagonal is +inf.
/// Throws kInvalidArgument for v <= 0.
SquareMatrix travel_time_matrix(const Scenario& s, double v);

/// Time T_k at which service to the k-th visited user completes.
/// Throws kInvalidArgument when the profile does not have one speed per hop
/// (K + 1) or a speed is not positive.
std::vector<double> arrival_times(const Tour& tour, const VelocityProfile& profile,
                                  const Scenario& s);

/// Throws kInvalidArgument unless `tour` is a permutation of 1..user_count.
void check_tour(const Tour& tour, std::size_t user_count);

/// Hop lengths d_1..d_{K+1} along 0 -> tour -> 0.
std::vector<double> hop_lengths(const Tour& tour, const Scenario& s);

}  // namespace uavtw
