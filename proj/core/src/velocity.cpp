#include "uavtw/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

namespace uavtw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Deadline slack at v_max below which the hops up to that user are pinned.
constexpr double kTightSlack = 1e-7;
constexpr double kInfeasibleSlack = 1e-9;

// s = rhs - sum(coef * x[index]) > 0, at most two free variables.
struct LinearConstraint {
  int i0 = -1;
  double c0 = 0.0;
  int i1 = -1;
  double c1 = 0.0;
  double rhs = 0.0;

  double slack(const Eigen::VectorXd& x) const {
    double s = rhs - c0 * x[i0];
    if (i1 >= 0) s -= c1 * x[i1];
    return s;
  }
};

// s = rhs - sum_{i < end} d_i / x_i > 0.
struct DeadlineConstraint {
  int end = 0;
  double rhs = 0.0;
};

class BarrierProblem {
 public:
  BarrierProblem(const VelocityProblem& p, std::size_t pinned)
      : p_(p), pinned_(pinned), n_(static_cast<int>(p.distances.size() - pinned)) {
    for (std::size_t i = pinned; i < p.distances.size(); ++i) d_.push_back(p.distances[i]);

    for (int j = 0; j < n_; ++j) {
      linear_.push_back({j, 1.0, -1, 0.0, p.v_max});
      linear_.push_back({j, -1.0, -1, 0.0, -p.v_min});
    }
    if (p.delta_v < p.v_max - p.v_min) {
      // |v_{i+1} - v_i| <= delta_v; the pinned neighbour is the constant v_max.
      if (pinned_ > 0) {
        linear_.push_back({0, 1.0, -1, 0.0, p.delta_v + p.v_max});
        linear_.push_back({0, -1.0, -1, 0.0, p.delta_v - p.v_max});
      }
      for (int j = 0; j + 1 < n_; ++j) {
        linear_.push_back({j + 1, 1.0, j, -1.0, p.delta_v});
        linear_.push_back({j, 1.0, j + 1, -1.0, p.delta_v});
      }
    }

    double pinned_time = 0.0;
    for (std::size_t i = 0; i < pinned; ++i) pinned_time += p.distances[i] / p.v_max;
    double served = 0.0;
    const std::size_t users = p.deadlines.size();
    for (std::size_t k = 0; k < users; ++k) {
      served += p.service[k];
      if (k < pinned) continue;
      const int end = static_cast<int>(k + 1 - pinned);
      const bool moves = std::any_of(d_.begin(), d_.begin() + end,
                                     [](double d) { return d > 0.0; });
      if (moves) deadlines_.push_back({end, p.deadlines[k] - served - pinned_time});
    }
  }

  int size() const noexcept { return n_; }
  std::size_t constraint_count() const noexcept {
    return linear_.size() + deadlines_.size();
  }

  bool strictly_feasible(const Eigen::VectorXd& x) const {
    for (const auto& c : linear_) {
      if (!(c.slack(x) > 0.0)) return false;
    }
    for (const auto& c : deadlines_) {
      if (!(deadline_slack(c, x) > 0.0)) return false;
    }
    return true;
  }

  double objective(const Eigen::VectorXd& x) const {
    double f = 0.0;
    for (int j = 0; j < n_; ++j) f += e_fly(x[j], d_[j], p_.power);
    return f;
  }

  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(n_);
    for (int j = 0; j < n_; ++j) g[j] = d_e_fly(x[j], d_[j], p_.power);
    return g;
  }

  // f(x) - mu * sum(log s); +inf outside the strict interior.
  double barrier_value(const Eigen::VectorXd& x, double mu) const {
    double phi = 0.0;
    for (const auto& c : linear_) {
      const double s = c.slack(x);
      if (!(s > 0.0)) return kInf;
      phi -= std::log(s);
    }
    for (const auto& c : deadlines_) {
      const double s = deadline_slack(c, x);
      if (!(s > 0.0)) return kInf;
      phi -= std::log(s);
    }
    return objective(x) + mu * phi;
  }

  void barrier_derivatives(const Eigen::VectorXd& x, double mu, Eigen::VectorXd& g,
                           Eigen::MatrixXd& h) const {
    g = objective_gradient(x);
    h = Eigen::MatrixXd::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) h(j, j) = d2_e_fly(x[j], d_[j], p_.power);

    for (const auto& c : linear_) {
      const double s = c.slack(x);
      const double w = mu / s;
      g[c.i0] += w * c.c0;
      h(c.i0, c.i0) += w / s * c.c0 * c.c0;
      if (c.i1 >= 0) {
        g[c.i1] += w * c.c1;
        h(c.i1, c.i1) += w / s * c.c1 * c.c1;
        h(c.i0, c.i1) += w / s * c.c0 * c.c1;
        h(c.i1, c.i0) += w / s * c.c0 * c.c1;
      }
    }
    Eigen::VectorXd ds(n_);
    for (const auto& c : deadlines_) {
      const double s = deadline_slack(c, x);
      // ds/dx_i = d_i / x_i^2, d2s/dx_i^2 = -2 d_i / x_i^3
      for (int i = 0; i < c.end; ++i) ds[i] = d_[i] / (x[i] * x[i]);
      for (int i = 0; i < c.end; ++i) {
        g[i] -= mu * ds[i] / s;
        h(i, i) += mu * 2.0 * d_[i] / (x[i] * x[i] * x[i]) / s;
        for (int j = 0; j < c.end; ++j) h(i, j) += mu * ds[i] * ds[j] / (s * s);
      }
    }
  }

 private:
  double deadline_slack(const DeadlineConstraint& c, const Eigen::VectorXd& x) const {
    double t = 0.0;
    for (int i = 0; i < c.end; ++i) t += d_[i] / x[i];
    return c.rhs - t;
  }

  const VelocityProblem& p_;
  std::size_t pinned_;
  int n_;
  std::vector<double> d_;
  std::vector<LinearConstraint> linear_;
  std::vector<DeadlineConstraint> deadlines_;
};

void check_problem(const VelocityProblem& p) {
  const std::size_t users = p.deadlines.size();
  if (p.distances.size() != users + 1 || p.service.size() != users) {
    throw Error(ErrorKind::kInvalidArgument,
                "velocity problem needs K+1 distances and K service times/deadlines");
  }
  if (!(p.v_min > 0.0 && p.v_min < p.v_max && p.delta_v > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "velocity problem needs 0 < v_min < v_max and delta_v > 0");
  }
}

OptimizationReport make_report(const VelocityProblem& p, std::vector<double> speeds) {
  OptimizationReport r;
  double now = 0.0;
  for (std::size_t k = 0; k < p.deadlines.size(); ++k) {
    now += p.distances[k] / speeds[k] + p.service[k];
    r.arrival_times.push_back(now);
  }
  r.energy.fly_j = objective_and_gradient(speeds, p.distances, p.power).value;
  r.energy.total_j = r.energy.fly_j;
  r.profile.speeds = std::move(speeds);
  return r;
}

}  // namespace

VelocityProblem make_velocity_problem(const Tour& tour, const Scenario& s) {
  VelocityProblem p;
  p.distances = hop_lengths(tour, s);
  for (int u : tour.order) {
    p.service.push_back(s.service_times()[u]);
    p.deadlines.push_back(s.deadline(u));
  }
  p.v_min = s.uav().v_min;
  p.v_max = s.uav().v_max;
  p.delta_v = s.uav().delta_v;
  p.power = s.power();
  return p;
}

ObjectiveEval objective_and_gradient(std::span<const double> speeds,
                                     std::span<const double> distances,
                                     const PowerModelParams& p) {
  if (speeds.size() != distances.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "objective_and_gradient: one speed per hop distance required");
  }
  ObjectiveEval out;
  out.gradient.resize(speeds.size());
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    if (!(speeds[i] > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "objective_and_gradient: speeds must be positive");
    }
    out.value += e_fly(speeds[i], distances[i], p);
    out.gradient[i] = d_e_fly(speeds[i], distances[i], p);
  }
  return out;
}

OptimizationReport optimize_velocities(const VelocityProblem& problem,
                                       const VelocityOptions& opts) {
  check_problem(problem);
  const std::size_t hops = problem.distances.size();
  const std::size_t users = problem.deadlines.size();

  // Deadline slack at v_max; a user whose slack is (numerically) zero pins
  // every hop up to it at v_max.
  std::size_t pinned = 0;
  double now = 0.0;
  for (std::size_t k = 0; k < users; ++k) {
    now += problem.distances[k] / problem.v_max + problem.service[k];
    const double slack = problem.deadlines[k] - now;
    if (slack < -kInfeasibleSlack) {
      throw Error(ErrorKind::kInfeasibleInput,
                  "tour misses the deadline of stop " + std::to_string(k + 1) +
                      " even at maximum speed");
    }
    if (slack <= kTightSlack) pinned = k + 1;
  }

  const BarrierProblem barrier(problem, pinned);
  const int n = barrier.size();

  // Strictly interior start just below v_max.
  Eigen::VectorXd x(n);
  double backoff = std::min({1.0, 0.5 * (problem.v_max - problem.v_min), 0.5 * problem.delta_v});
  bool interior = false;
  for (int attempt = 0; attempt < 80 && !interior; ++attempt, backoff *= 0.5) {
    x.setConstant(problem.v_max - backoff);
    interior = barrier.strictly_feasible(x);
  }
  if (!interior) {
    throw Error(ErrorKind::kNumericFailure, "could not find a strictly feasible start");
  }

  int iterations = 0;
  double mu = opts.mu_start;
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  for (;;) {
    for (int it = 0; it < opts.max_newton_per_stage; ++it) {
      barrier.barrier_derivatives(x, mu, g, h);
      const double scale = std::max(1.0, barrier.objective_gradient(x).lpNorm<Eigen::Infinity>());
      if (g.lpNorm<Eigen::Infinity>() <= 1e-11 * scale) break;

      Eigen::LLT<Eigen::MatrixXd> llt(h);
      if (llt.info() != Eigen::Success) break;
      const Eigen::VectorXd step = llt.solve(-g);
      const double decrement = -g.dot(step);
      const double f0 = barrier.barrier_value(x, mu);
      if (decrement <= 0.0 || 0.5 * decrement <= 1e-22 * (1.0 + std::abs(f0))) break;

      double t = 1.0;
      bool moved = false;
      // Close to the minimizer the Armijo test drowns in rounding of f, so a
      // strictly feasible full Newton step is taken as is.
      if (0.5 * decrement <= 1e-8 * (1.0 + std::abs(f0))) {
        const Eigen::VectorXd trial = x + step;
        if (barrier.strictly_feasible(trial)) {
          x = trial;
          moved = true;
        }
      }
      for (int ls = 0; ls < 60 && !moved; ++ls, t *= 0.5) {
        const Eigen::VectorXd trial = x + t * step;
        const double f1 = barrier.barrier_value(trial, mu);
        if (f1 <= f0 - 0.25 * t * decrement) {
          x = trial;
          moved = true;
          break;
        }
      }
      ++iterations;
      if (!moved) break;
    }
    if (mu <= opts.mu_end * (1.0 + 1e-12)) break;
    // Once the duality gap m * mu is far inside the tolerance, smaller mu only
    // pushes active slacks into the rounding noise of the prefix sums.
    const double gap = static_cast<double>(barrier.constraint_count()) * mu;
    if (gap <= 0.1 * opts.kkt_tolerance * std::max(1.0, std::abs(barrier.objective(x)))) break;
    mu = std::max(mu * opts.mu_factor, opts.mu_end);
  }

  barrier.barrier_derivatives(x, mu, g, h);
  const Eigen::VectorXd grad_f = barrier.objective_gradient(x);
  const double objective = barrier.objective(x);
  const double stationarity =
      g.lpNorm<Eigen::Infinity>() / std::max(1.0, grad_f.lpNorm<Eigen::Infinity>());
  const double complementarity =
      static_cast<double>(barrier.constraint_count()) * mu / std::max(1.0, std::abs(objective));

  std::vector<double> speeds(hops, problem.v_max);
  for (int j = 0; j < n; ++j) speeds[pinned + static_cast<std::size_t>(j)] = x[j];
  OptimizationReport report = make_report(problem, std::move(speeds));
  report.iterations = iterations;
  report.kkt_residual = std::max(stationarity, complementarity);
  report.converged = report.kkt_residual < opts.kkt_tolerance;
  if (!report.converged) {
    throw OptimizationError("velocity optimization stopped with KKT residual " +
                                std::to_string(report.kkt_residual),
                            std::move(report));
  }
  return report;
}

OptimizationReport optimize_velocities(const Tour& tour, const Scenario& s,
                                       const VelocityOptions& opts) {
  const VelocityProblem problem = make_velocity_problem(tour, s);
  const double service = std::accumulate(problem.service.begin(), problem.service.end(), 0.0);
  const auto add_service_energy = [&](OptimizationReport& r) {
    r.energy.hover_j = p_fly(s.uav().v_hover, s.power()) * service;
    r.energy.comm_j = s.uav().p_com_w * service;
    r.energy.total_j = r.energy.fly_j + r.energy.hover_j + r.energy.comm_j;
  };
  try {
    OptimizationReport report = optimize_velocities(problem, opts);
    add_service_energy(report);
    return report;
  } catch (const OptimizationError& e) {
    OptimizationReport best = e.best();
    add_service_energy(best);
    throw OptimizationError(e.what(), std::move(best));
  }
}

PlanSelection pick_best_plan(const FeasiblePathSet& set, const Scenario& s,
                             const VelocityOptions& opts) {
  PlanSelection out;
  const double per_meter =
      p_fly(max_range_speed(s.power(), s.uav().v_min, s.uav().v_max), s.power()) /
      max_range_speed(s.power(), s.uav().v_min, s.uav().v_max);
  const double service =
      std::accumulate(s.service_times().begin(), s.service_times().end(), 0.0);
  const double fixed = (p_fly(s.uav().v_hover, s.power()) + s.uav().p_com_w) * service;

  struct Candidate {
    double bound;
    std::size_t index;
  };
  std::vector<Candidate> order;
  for (std::size_t i = 0; i < set.tours.size(); ++i) {
    if (!set.meets_deadlines[i]) continue;
    const auto d = hop_lengths(set.tours[i], s);
    const double length = std::accumulate(d.begin(), d.end(), 0.0);
    // Slightly loosened so golden-section error never prunes a true optimum.
    order.push_back({(length * per_meter + fixed) * (1.0 - 1e-9), i});
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const Candidate& a, const Candidate& b) { return a.bound < b.bound; });

  const auto better = [](const PlanResult& a, const PlanResult& b) {
    if (a.total_energy_j() != b.total_energy_j()) return a.total_energy_j() < b.total_energy_j();
    if (a.total_time_at_vmax != b.total_time_at_vmax) {
      return a.total_time_at_vmax < b.total_time_at_vmax;
    }
    return a.tour < b.tour;
  };

  for (std::size_t c = 0; c < order.size(); ++c) {
    const Candidate& cand = order[c];
    if (out.best && cand.bound > out.best->total_energy_j()) {
      out.pruned = order.size() - c;
      break;
    }
    PlanResult plan;
    plan.tour = set.tours[cand.index];
    plan.total_time_at_vmax = set.total_times[cand.index];
    try {
      plan.report = optimize_velocities(plan.tour, s, opts);
    } catch (const Error&) {
      ++out.failures;
      continue;
    }
    ++out.optimized;
    if (plan.total_energy_j() > s.uav().energy_budget_j) {
      ++out.over_budget;
      continue;
    }
    if (!out.best || better(plan, *out.best)) out.best = std::move(plan);
  }
  return out;
}

}  // namespace uavtw
