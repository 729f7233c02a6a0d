#include "uavtw/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "uavtw/energy.hpp"
#include "uavtw/error.hpp"
#include "uavtw/velocity.hpp"

namespace uavtw {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Own uniform mapping: std::uniform_real_distribution differs between
// standard libraries, which would break cross-platform reproducibility.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested != 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, n) on `workers` threads. body must not throw.
template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& body) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
}

ScenarioData draw_topology(const ExperimentConfig& cfg, std::mt19937_64& rng) {
  ScenarioData d;
  const double scale = cfg.area_m / cfg.depot_reference_area_m;
  d.depot = {cfg.depot.x * scale, cfg.depot.y * scale};
  d.uav = cfg.uav;
  d.channel = cfg.channel;
  d.power = cfg.power;
  d.area_side_m = cfg.area_m;
  if (cfg.auto_v_hover) d.uav = with_hover_speed(d.uav, d.power);
  d.users.reserve(cfg.k_users);
  for (std::size_t k = 0; k < cfg.k_users; ++k) {
    GroundUser u;
    u.id = static_cast<int>(k + 1);
    u.position.x = uniform01(rng) * cfg.area_m;
    u.position.y = uniform01(rng) * cfg.area_m;
    u.deadline_s = cfg.eta_min_s + uniform01(rng) * (cfg.eta_max_s - cfg.eta_min_s);
    u.data_bits = cfg.data_bits;
    d.users.push_back(u);
  }
  return d;
}

}  // namespace

std::string_view to_string(SweepParameter p) noexcept {
  switch (p) {
    case SweepParameter::kNone: return "none";
    case SweepParameter::kVMax: return "v_max";
    case SweepParameter::kEtaMin: return "eta_min";
    case SweepParameter::kArea: return "area";
    case SweepParameter::kEnergyBudget: return "energy_budget";
    case SweepParameter::kKUsers: return "k_users";
  }
  return "?";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) noexcept {
  for (auto p : {SweepParameter::kNone, SweepParameter::kVMax, SweepParameter::kEtaMin,
                 SweepParameter::kArea, SweepParameter::kEnergyBudget,
                 SweepParameter::kKUsers}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

void validate(const ExperimentConfig& cfg) {
  std::vector<std::string> issues;
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (cfg.trials < 1) issues.push_back("trials must be >= 1");
  if (cfg.k_users < 1) issues.push_back("k_users must be >= 1");
  if (!(std::isfinite(cfg.area_m) && cfg.area_m > 0.0)) issues.push_back("area_m must be > 0");
  if (!finite_nonneg(cfg.eta_min_s)) issues.push_back("eta_min_s must be finite and >= 0");
  if (!finite_nonneg(cfg.eta_max_s)) issues.push_back("eta_max_s must be finite and >= 0");
  if (cfg.eta_min_s > cfg.eta_max_s) issues.push_back("eta_min_s must not exceed eta_max_s");
  if (!(std::isfinite(cfg.data_bits) && cfg.data_bits > 0.0))
    issues.push_back("data_bits must be > 0");
  if (!(cfg.depot_reference_area_m > 0.0)) issues.push_back("depot_reference_area_m must be > 0");
  if (cfg.methods.empty()) issues.push_back("methods must not be empty");
  if (cfg.sweep != SweepParameter::kNone && cfg.sweep_values.empty())
    issues.push_back("sweep '" + std::string(to_string(cfg.sweep)) + "' has no values");
  for (double v : cfg.sweep_values) {
    if (!std::isfinite(v)) issues.push_back("sweep values must be finite");
    if (cfg.sweep == SweepParameter::kKUsers && (v < 1.0 || v != std::floor(v)))
      issues.push_back("k_users sweep values must be positive integers");
  }
  if (!issues.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& i : issues) msg += "\n  " + i;
    throw Error(ErrorKind::kValidation, msg);
  }
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& cfg, double value) {
  ExperimentConfig out = cfg;
  out.sweep = SweepParameter::kNone;
  out.sweep_values.clear();
  switch (cfg.sweep) {
    case SweepParameter::kNone: break;
    case SweepParameter::kVMax:
      // Keep a non-binding speed-change limit non-binding.
      if (cfg.uav.delta_v >= cfg.uav.v_max) out.uav.delta_v = value;
      out.uav.v_max = value;
      break;
    case SweepParameter::kEtaMin: out.eta_min_s = value; break;
    case SweepParameter::kArea: out.area_m = value; break;
    case SweepParameter::kEnergyBudget: out.uav.energy_budget_j = value; break;
    case SweepParameter::kKUsers: out.k_users = static_cast<std::size_t>(value); break;
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index) {
  return splitmix64(splitmix64(master_seed) ^ static_cast<std::uint64_t>(index));
}

TrialOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
  TrialOutcome out;
  out.seed = seed;
  out.methods.reserve(cfg.methods.size());
  for (PlanMethod m : cfg.methods) out.methods.push_back({.method = m});

  std::mt19937_64 rng(seed);
  std::optional<Scenario> scenario;
  try {
    scenario.emplace(draw_topology(cfg, rng));
  } catch (const Error& e) {
    out.note = e.what();
    return out;
  }
  const Scenario& s = *scenario;
  const TimeWindowInstance inst = make_instance(s, s.uav().v_max);
  PlannerOptions popts;
  popts.psi = cfg.exhaustive_psi;

  for (MethodOutcome& mo : out.methods) {
    const auto t0 = Clock::now();
    try {
      const FeasiblePathSet set = run_planner(mo.method, inst, popts);
      mo.candidate_tours = set.size();
      const PlanSelection sel = pick_best_plan(set, s);
      mo.solver_failures = sel.failures;
      if (sel.best) {
        mo.success = true;
        mo.energy_j = sel.best->total_energy_j();
      }
    } catch (const Error& e) {
      if (!out.note.empty()) out.note += "; ";
      out.note += std::string(to_string(mo.method)) + ": " + e.what();
      ++mo.solver_failures;
    }
    mo.runtime_s = seconds_since(t0);
  }
  return out;
}

OutageSummary combined_outage(double infeasible_rate, double epsilon) {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(infeasible_rate) || !in_unit(epsilon))
    throw Error(ErrorKind::kInvalidArgument, "combined_outage: probabilities must lie in [0, 1]");
  return {infeasible_rate, epsilon, 1.0 - (1.0 - epsilon) * (1.0 - infeasible_rate)};
}

std::vector<TrialStats> aggregate(const ExperimentConfig& cfg,
                                  const std::vector<TrialOutcome>& outcomes) {
  std::vector<TrialStats> stats;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    TrialStats st;
    st.method = cfg.methods[m];
    st.trials = outcomes.size();
    double e_sum = 0.0, t_sum = 0.0;
    double e_min = std::numeric_limits<double>::infinity();
    double e_max = -e_min;
    for (const TrialOutcome& t : outcomes) {
      const MethodOutcome& mo = t.methods[m];
      t_sum += mo.runtime_s;
      st.solver_failures += mo.solver_failures;
      if (!mo.success) continue;
      ++st.successes;
      e_sum += mo.energy_j;
      e_min = std::min(e_min, mo.energy_j);
      e_max = std::max(e_max, mo.energy_j);
    }
    const double infeasible =
        st.trials == 0 ? 0.0
                       : static_cast<double>(st.trials - st.successes) / static_cast<double>(st.trials);
    st.outage = combined_outage(infeasible, cfg.channel.epsilon);
    if (st.successes > 0) {
      // Clamp guards against the mean drifting outside [min, max] by rounding.
      st.energy_mean_j = std::clamp(e_sum / static_cast<double>(st.successes), e_min, e_max);
      st.energy_min_j = e_min;
      st.energy_max_j = e_max;
    } else {
      st.energy_mean_j = st.energy_min_j = st.energy_max_j = kNaN;
    }
    st.runtime_mean_s = st.trials == 0 ? kNaN : t_sum / static_cast<double>(st.trials);
    stats.push_back(st);
  }
  return stats;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<double> values = cfg.sweep_values;
  if (cfg.sweep == SweepParameter::kNone) values = {0.0};
  const std::size_t workers = resolve_threads(cfg.threads);

  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (double v : values) {
    const ExperimentConfig point_cfg = apply_sweep_value(cfg, v);
    validate(point_cfg);
    SweepPoint p;
    p.value = v;
    p.outcomes.resize(cfg.trials);
    parallel_for(cfg.trials, workers, [&](std::size_t i) {
      p.outcomes[i] = run_trial(point_cfg, trial_seed(cfg.seed, i));
    });
    p.stats = aggregate(point_cfg, p.outcomes);
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<BenchRow> runtime_benchmark(const std::vector<std::size_t>& k_values,
                                        std::size_t trials, std::uint64_t seed,
                                        const std::vector<PlanMethod>& methods) {
  if (trials < 1) throw Error(ErrorKind::kInvalidArgument, "runtime_benchmark: trials must be >= 1");
  const PlannerOptions popts;
  for (std::size_t k : k_values) {
    for (PlanMethod m : methods) {
      const std::size_t cap = m == PlanMethod::kExhaustive ? popts.exhaustive_max_users
                              : m == PlanMethod::kDp        ? popts.dp_max_users
                              : m == PlanMethod::kTsp       ? popts.tsp_max_users
                                                            : std::numeric_limits<std::size_t>::max();
      if (k < 1 || k > cap)
        throw Error(ErrorKind::kTooLarge, "runtime_benchmark: K=" + std::to_string(k) +
                                              " outside the range of " +
                                              std::string(to_string(m)));
    }
  }

  ExperimentConfig cfg;
  cfg.eta_min_s = cfg.eta_max_s = 1e9;  // every order is feasible
  std::vector<BenchRow> rows;
  for (std::size_t k : k_values) {
    cfg.k_users = k;
    std::vector<BenchRow> krows;
    for (PlanMethod m : methods) krows.push_back({k, m, trials, 0.0, kNaN});
    for (std::size_t t = 0; t < trials; ++t) {
      std::mt19937_64 rng(trial_seed(seed, t));
      const Scenario s(draw_topology(cfg, rng));
      const TimeWindowInstance inst = make_instance(s, s.uav().v_max);
      for (BenchRow& row : krows) {
        // Repeat fast searches so each sample spans at least ~1 ms.
        std::size_t reps = 0;
        const auto t0 = Clock::now();
        double elapsed = 0.0;
        do {
          const FeasiblePathSet set = run_planner(row.method, inst, popts);
          if (set.empty() && row.method != PlanMethod::kTsp)
            throw Error(ErrorKind::kNumericFailure, "runtime_benchmark: search found no tour");
          ++reps;
          elapsed = seconds_since(t0);
        } while (elapsed < 1e-3);
        const double per_call = elapsed / static_cast<double>(reps);
        row.mean_s += per_call / static_cast<double>(trials);
        row.min_s = std::isnan(row.min_s) ? per_call : std::min(row.min_s, per_call);
      }
    }
    rows.insert(rows.end(), krows.begin(), krows.end());
  }
  return rows;
}

// Presets. Values not stated for a figure fall back to the defaults above:
// 400 m area, K = 6, 10 Mbit per user, B = 2 MHz, eps = 1e-3, G = 15 dB,
// 500 kJ budget, v_max = 45 m/s. Desk-scale: 200 trials.
std::optional<ExperimentConfig> preset(std::string_view name) {
  ExperimentConfig c;
  c.trials = 200;
  auto sweep = [&c](SweepParameter p, std::vector<double> v) {
    c.sweep = p;
    c.sweep_values = std::move(v);
  };
  if (name == "fig4") {
    // Trajectory comparison: one operating point, all methods.
    c.k_users = 7;
    c.data_bits = 50e6;
    c.eta_min_s = 5.0;
    c.eta_max_s = 17.0;
    c.uav.energy_budget_j = 100e3;
    c.uav.v_max = c.uav.delta_v = 60.0;
  } else if (name == "fig5") {
    c.eta_min_s = 22.0;
    c.eta_max_s = 60.0;
    c.channel.bandwidth_hz = 3e6;
    sweep(SweepParameter::kVMax, {20, 25, 30, 35, 40, 45, 50});
  } else if (name == "fig6") {
    c.eta_max_s = 65.0;
    c.channel.bandwidth_hz = 3e6;
    sweep(SweepParameter::kEtaMin, {5, 10, 15, 20, 25, 30, 35, 40});
  } else if (name == "fig7") {
    c.k_users = 7;
    c.eta_min_s = 15.0;
    c.eta_max_s = 65.0;
    c.channel.bandwidth_hz = 3e6;
    sweep(SweepParameter::kArea, {200, 300, 400, 500, 600, 700, 800});
  } else if (name == "fig8") {
    c.k_users = 4;
    c.eta_min_s = 3.0;
    c.eta_max_s = 15.0;
    sweep(SweepParameter::kEnergyBudget, {2e3, 3e3, 4e3, 5e3, 6e3, 8e3, 10e3, 15e3});
  } else if (name == "fig9") {
    c.eta_min_s = 3.0;
    c.eta_max_s = 15.0;
    c.uav.v_max = c.uav.delta_v = 100.0;
    sweep(SweepParameter::kKUsers, {2, 3, 4, 5, 6, 7});
  } else if (name == "fig10") {
    c.k_users = 4;
    c.exhaustive_psi = 4;
    c.eta_min_s = 15.0;
    c.eta_max_s = 60.0;
    c.uav.v_max = c.uav.delta_v = 50.0;
    sweep(SweepParameter::kArea, {200, 300, 400, 500, 600, 700, 800});
  } else if (name == "fig11") {
    // Runtime versus K with deadlines that never bind.
    c.trials = 20;
    c.eta_min_s = c.eta_max_s = 1e6;
    sweep(SweepParameter::kKUsers, {3, 4, 5, 6, 7, 8});
  } else {
    return std::nullopt;
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"};
}

}  // namespace uavtw
