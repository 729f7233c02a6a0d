// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: uavtw_acceptance [path-to-uavtw-cli]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "test_util.hpp"
#include "uavtw/channel.hpp"
#include "uavtw/energy.hpp"
#include "uavtw/error.hpp"
#include "uavtw/experiment.hpp"
#include "uavtw/io.hpp"
#include "uavtw/planner.hpp"
#include "uavtw/velocity.hpp"

using namespace uavtw;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1 ----------------------------------------------------------------------
Verdict dp_worked_example() {
  Verdict v;
  const TimeWindowInstance inst = testutil::dp_example();
  struct Want { std::uint32_t mask; int last; double cost; };
  const Want want[] = {{0b001, 1, 1.0}, {0b010, 2, 1.4}, {0b100, 3, 1.2}, {0b011, 2, 1.5},
                       {0b011, 1, 1.9}, {0b101, 3, 2.5}, {0b111, 3, 3.4}};
  const DpResult r = dp_solve(inst);
  int matched = 0;
  for (const auto& w : want) {
    for (const auto& s : r.states) {
      if (s.visited == w.mask && s.last == w.last && std::abs(s.cost - w.cost) <= 1e-12) ++matched;
    }
  }
  v.require(matched == 7, "all 7 tabulated states");
  v.require(!r.paths.empty() && r.paths.tours[0] == Tour{{2, 1, 3}}, "tour 0-2-1-3-0");

  const int reps = 1000;
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) (void)dp_solve(inst);
  const double per_call = since(t0) / reps;
  v.require(per_call < 1e-3, "runtime < 1 ms");
  v.detail << matched << "/7 states within 1e-12, " << r.states.size()
           << " states retained, tour " << (r.paths.empty() ? "-" : "2-1-3") << ", "
           << per_call * 1e6 << " us/solve";
  return v;
}

// 2 ----------------------------------------------------------------------
Verdict heuristic_worked_example() {
  Verdict v;
  const TimeWindowInstance inst = testutil::heuristic_example();
  const FeasiblePathSet set = heuristic_search(inst);
  v.require(set.size() == 1 && set.tours[0] == Tour{{1, 2, 3}}, "tour 1-2-3");
  if (set.size() == 1) {
    const TourTiming t = evaluate_tour(inst, set.tours[0]);
    const double want[] = {1.12, 1.74, 3.86};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(t.completion[i] - want[i]));
    v.require(worst <= 1e-12, "cumulative times 1.12, 1.74, 3.86");
    v.detail << "tour 1-2-3, times " << t.completion[0] << ", " << t.completion[1] << ", "
             << t.completion[2] << " (max dev " << worst << ")";
  }
  return v;
}

// 3 ----------------------------------------------------------------------
Verdict oracle_equivalence() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  int feasible = 0, heuristic_found = 0, bad_a = 0, bad_b = 0, bad_c = 0, bad_set = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 3 + static_cast<std::size_t>(i) % 6;
    const Scenario s(testutil::random_data(rng, k, 5.0, 5.0 + 10.0 * static_cast<double>(k), 30.0));
    const TimeWindowInstance inst = make_instance(s, s.uav().v_max);
    const oracle::Instance o = oracle::make_instance(s, s.uav().v_max);
    const oracle::BruteForce bf = oracle::brute_force(o.cost, o.travel, o.deadline);

    const FeasiblePathSet ex = exhaustive_search(inst);
    const FeasiblePathSet dp = dp_search(inst);
    const FeasiblePathSet he = heuristic_search(inst);
    const FeasiblePathSet ts = tsp_baseline(inst);

    std::set<Tour> ex_set(ex.tours.begin(), ex.tours.end());
    std::set<Tour> bf_set;
    for (const auto& p : bf.feasible) bf_set.insert(Tour{p});
    if (ex_set != bf_set) ++bad_set;

    if (ex.empty() != dp.empty() || (!ex.empty() && dp.total_times[0] != ex.total_times[0])) ++bad_a;
    if (!ex.empty()) ++feasible;
    for (const auto& t : he.tours) {
      ++heuristic_found;
      if (!ex_set.count(t)) ++bad_b;
    }
    const double len = closed_tour_travel(inst, ts.tours.at(0));
    if (std::abs(len - bf.best_closed_travel) > 1e-9 * bf.best_closed_travel) ++bad_c;
  }
  const double secs = since(t0);
  v.require(bad_a == 0, "(a) dp minimum == exhaustive minimum");
  v.require(bad_b == 0, "(b) heuristic tour in exhaustive set");
  v.require(bad_c == 0, "(c) tsp length == brute force");
  v.require(bad_set == 0, "exhaustive set == brute-force feasible set");
  v.require(secs < 60.0, "runtime < 60 s");
  v.detail << "200 instances (" << feasible << " feasible, heuristic found " << heuristic_found
           << "); mismatches a=" << bad_a << " b=" << bad_b << " c=" << bad_c
           << " set=" << bad_set << "; " << secs << " s";
  return v;
}

// 4 ----------------------------------------------------------------------
Verdict convexity_and_gradients() {
  Verdict v;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto scaled = [&](double x) { return x * std::exp(std::log(0.5) + u(rng) * std::log(4.0)); };
  int nonconvex = 0, grad_bad = 0;
  double worst_grad = 0.0;
  for (int i = 0; i < 10000; ++i) {
    PowerModelParams p;
    p.p0_w = scaled(p.p0_w);
    p.p1_w = scaled(p.p1_w);
    p.alpha1 = scaled(p.alpha1);
    p.alpha2 = scaled(p.alpha2);
    p.alpha3 = scaled(p.alpha3);
    const double vel = 0.1 + u(rng) * 99.9;
    const double d = 1.0 + u(rng) * 1999.0;
    if (!(d2_e_fly(vel, d, p) > 0.0)) ++nonconvex;
    // Five-point central difference.
    const double h = 1e-3 * vel;
    auto f = [&](double x) { return e_fly(x, d, p); };
    const double fd = (f(vel - 2 * h) - 8 * f(vel - h) + 8 * f(vel + h) - f(vel + 2 * h)) / (12 * h);
    const double an = d_e_fly(vel, d, p);
    const double rel = std::abs(an - fd) / std::abs(an);
    worst_grad = std::max(worst_grad, rel);
    if (!(rel <= 1e-5)) ++grad_bad;
  }
  // Multi-hop objective gradient.
  const PowerModelParams p;
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i) % 6;
    std::vector<double> speeds(n), dist(n);
    for (std::size_t j = 0; j < n; ++j) {
      speeds[j] = 1.0 + u(rng) * 59.0;
      dist[j] = 10.0 + u(rng) * 500.0;
    }
    const auto eval = objective_and_gradient(speeds, dist, p);
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-3 * speeds[j];
      auto at = [&](double dx) {
        auto x = speeds;
        x[j] += dx;
        return objective_and_gradient(x, dist, p).value;
      };
      const double fd = (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
      const double rel = std::abs(eval.gradient[j] - fd) / std::abs(eval.gradient[j]);
      worst_grad = std::max(worst_grad, rel);
      if (!(rel <= 1e-5)) ++grad_bad;
    }
  }
  int beta_bad = 0;
  double beta_min = 1.0;
  for (int i = 0; i < 1000000; ++i) {
    const double x = 1e3 * static_cast<double>(i) / 999999.0;
    const double b = beta1(x);
    beta_min = std::min(beta_min, b);
    if (!(b >= 0.5)) ++beta_bad;
  }
  v.require(nonconvex == 0, "d2E/dv2 > 0");
  v.require(grad_bad == 0, "gradient within 1e-5");
  v.require(beta_bad == 0, "beta1 >= 1/2");
  v.detail << "10^4 curvature samples (" << nonconvex << " non-positive), worst gradient rel err "
           << worst_grad << ", beta1 min " << beta_min << " over 10^6 grid points";
  return v;
}

// 5 ----------------------------------------------------------------------
Verdict solver_optimality() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0, kkt_bad = 0, tight = 0, tight_rejected = 0;
  double worst_gap = 0.0, worst_kkt = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 1 + static_cast<std::size_t>(i) % 3;
    const Scenario s(testutil::random_data(rng, k, 1e4, 1e4, 30.0));
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    VelocityProblem p = make_velocity_problem(Tour{order}, s);
    const bool is_tight = i % 5 == 0;
    double t = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      t += p.distances[j] / p.v_max + p.service[j];
      p.deadlines[j] = is_tight ? t : t * (1.0 + 1.5 * u(rng));
    }
    tight += is_tight;
    OptimizationReport r;
    try {
      r = optimize_velocities(p);
    } catch (const Error& e) {
      if (is_tight) ++tight_rejected;
      ++mismatches;
      std::fprintf(stderr, "c5 #%d k=%zu tight=%d threw: %s\n", i, k, int(is_tight), e.what());
      continue;
    }
    const double grid =
        oracle::grid_min_energy(p.distances, p.service, p.deadlines, p.v_min, p.v_max, p.power, 0.05);
    const double gap = std::abs(r.energy.fly_j - grid) / grid;
    worst_gap = std::max(worst_gap, gap);
    worst_kkt = std::max(worst_kkt, r.kkt_residual);
    if (!(gap <= 1e-3) || r.energy.fly_j > grid * (1 + 1e-6)) {
      ++mismatches;
      std::fprintf(stderr, "c5 #%d k=%zu tight=%d solver=%.12g grid=%.12g\n", i, k, int(is_tight), r.energy.fly_j, grid);
    }
    if (!(r.kkt_residual < 1e-6)) ++kkt_bad;
  }
  const double secs = since(t0);
  v.require(mismatches == 0, "objective within 0.1% of grid");
  v.require(kkt_bad == 0, "KKT residual < 1e-6");
  v.require(tight_rejected == 0, "all-v_max start accepted");
  v.require(secs < 120.0, "runtime < 120 s");
  v.detail << "100 instances (" << tight << " with deadlines tight at v_max); worst gap "
           << worst_gap << ", worst KKT " << worst_kkt << "; " << secs << " s";
  return v;
}

// 6 ----------------------------------------------------------------------
Verdict outage_contract() {
  Verdict v;
  ChannelParams ch;
  ch.epsilon = 0.01;
  ch.rician_g = std::pow(10.0, 1.5);
  const double gain = snr_gain(ch, 5.0, 50.0);
  const double rate = approx_rate(ch, gain);
  const double emp = empirical_outage(ch, gain, rate, 1000000, 20240601);
  v.require(emp >= 0.008 && emp <= 0.012, "empirical outage in [0.008, 0.012]");
  v.detail << "empirical outage " << emp << "; y_Q rel err vs exact root:";
  for (double g_db : {10.0, 15.0, 20.0, 30.0}) {
    const double g = std::pow(10.0, g_db / 10.0);
    const double exact = marcum_y_quantile(g, ch.epsilon);
    const double rel = std::abs(y_q_large_g(g, ch.epsilon) - exact) / exact;
    v.require(rel <= 0.05, "y_Q within 5% at " + std::to_string(g_db) + " dB");
    v.detail << " " << g_db << "dB=" << rel;
  }
  return v;
}

// 7 ----------------------------------------------------------------------
struct PairCount {
  std::size_t both = 0, ordered = 0;
  double rate() const { return both == 0 ? 1.0 : static_cast<double>(ordered) / both; }
};

Verdict trend_reproduction() {
  Verdict v;
  const auto t0 = Clock::now();
  const std::size_t kEx = 0, kHe = 1, kDp = 2, kTsp = 3;  // default method order
  PairCount ex_dp, dp_he, dp_tsp;
  int monotone_violations = 0, points = 0;
  double worst_dp_gap = 0.0;
  std::ostringstream notes;

  auto tally = [&](const std::vector<SweepPoint>& sweep) {
    for (const SweepPoint& p : sweep) {
      double sum_ex = 0.0, sum_dp = 0.0;
      std::size_t n = 0;
      for (const TrialOutcome& t : p.outcomes) {
        const auto& m = t.methods;
        auto le = [](double a, double b) { return a <= b * (1.0 + 1e-9); };
        if (m[kEx].success && m[kDp].success) {
          ++ex_dp.both;
          ex_dp.ordered += le(m[kEx].energy_j, m[kDp].energy_j);
          sum_ex += m[kEx].energy_j;
          sum_dp += m[kDp].energy_j;
          ++n;
        }
        if (m[kDp].success && m[kHe].success) {
          ++dp_he.both;
          dp_he.ordered += le(m[kDp].energy_j, m[kHe].energy_j);
        }
        if (m[kDp].success && m[kTsp].success) {
          ++dp_tsp.both;
          dp_tsp.ordered += le(m[kDp].energy_j, m[kTsp].energy_j);
        }
      }
      if (n > 0) worst_dp_gap = std::max(worst_dp_gap, (sum_dp - sum_ex) / sum_ex);
    }
  };
  auto check_monotone = [&](const std::vector<SweepPoint>& sweep, const std::string& name) {
    for (std::size_t i = 1; i < sweep.size(); ++i) {
      for (std::size_t m = 0; m < 4; ++m) {
        ++points;
        if (sweep[i].stats[m].outage.combined > sweep[i - 1].stats[m].outage.combined) {
          ++monotone_violations;
          notes << " " << name << ":" << to_string(sweep[i].stats[m].method) << "@"
                << sweep[i].value;
        }
      }
    }
  };

  for (std::size_t k : {4, 5, 6}) {
    ExperimentConfig c5 = *preset("fig5");
    c5.k_users = k;
    c5.threads = 0;
    const auto s5 = run_sweep(c5);
    check_monotone(s5, "vmax/K" + std::to_string(k));
    tally(s5);
    ExperimentConfig c6 = *preset("fig6");
    c6.k_users = k;
    c6.threads = 0;
    const auto s6 = run_sweep(c6);
    check_monotone(s6, "eta/K" + std::to_string(k));
    tally(s6);
  }

  // Tight deadlines with a large speed limit: the setting of the trajectory
  // comparison. Averages over trials where all four methods succeed.
  ExperimentConfig c9 = *preset("fig9");
  c9.sweep_values = {4, 5, 6};
  c9.threads = 0;
  const auto s9 = run_sweep(c9);
  tally(s9);
  double mean[4] = {0, 0, 0, 0};
  std::size_t common = 0;
  for (const SweepPoint& p : s9) {
    for (const TrialOutcome& t : p.outcomes) {
      if (!std::all_of(t.methods.begin(), t.methods.end(), [](const auto& m) { return m.success; }))
        continue;
      ++common;
      for (std::size_t m = 0; m < 4; ++m) mean[m] += t.methods[m].energy_j;
    }
  }
  for (double& m : mean) m /= std::max<std::size_t>(common, 1);
  const bool fig4_order = common > 0 && mean[kTsp] >= mean[kHe] && mean[kHe] >= mean[kDp] &&
                          std::abs(mean[kDp] - mean[kEx]) <= 0.02 * mean[kEx];
  const double secs = since(t0);

  v.require(monotone_violations == 0, "(a) outage monotone in v_max and eta_min");
  v.require(ex_dp.rate() >= 0.95 && dp_he.rate() >= 0.95 && dp_tsp.rate() >= 0.95,
            "(b) per-trial ordering >= 95%");
  v.require(fig4_order, "(b) tsp >= heuristic >= dp ~ exhaustive on averages");
  v.require(worst_dp_gap <= 0.02, "(c) dp mean within 2% of exhaustive");
  v.require(secs < 600.0, "runtime < 10 min");
  v.detail << "monotone violations " << monotone_violations << "/" << points << notes.str()
           << "; ordering ex<=dp " << ex_dp.rate() << " (" << ex_dp.both << "), dp<=heur "
           << dp_he.rate() << " (" << dp_he.both << "), dp<=tsp " << dp_tsp.rate() << " ("
           << dp_tsp.both << "); common-success means ex/dp/heur/tsp " << mean[kEx] << "/"
           << mean[kDp] << "/" << mean[kHe] << "/" << mean[kTsp] << " J over " << common
           << " trials; worst dp gap " << worst_dp_gap * 100 << "%; " << secs << " s";
  return v;
}

// 8 ----------------------------------------------------------------------
Verdict complexity_signatures() {
  Verdict v;
  const auto ex = runtime_benchmark({7, 8}, 5, 31, {PlanMethod::kExhaustive});
  const auto dp = runtime_benchmark({12, 13}, 5, 31, {PlanMethod::kDp});
  const auto he = runtime_benchmark({100}, 5, 31, {PlanMethod::kHeuristic});
  const double ex_ratio = ex[1].mean_s / ex[0].mean_s;
  const double dp_ratio = dp[1].mean_s / dp[0].mean_s;
  v.require(ex_ratio > 6.0, "exhaustive 7->8 ratio > 6");
  v.require(dp_ratio >= 1.5 && dp_ratio <= 3.0, "dp 12->13 ratio in [1.5, 3]");
  v.require(he[0].mean_s < 1e-2, "heuristic K=100 < 10 ms");
  v.detail << "exhaustive 7->8 x" << ex_ratio << ", dp 12->13 x" << dp_ratio
           << ", heuristic K=100 " << he[0].mean_s * 1e3 << " ms";
  return v;
}

// 9 ----------------------------------------------------------------------
Verdict determinism(const std::string& cli) {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "uavtw_acceptance";
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  if (!cli.empty()) {
    const std::pair<const char*, const char*> runs[] = {{"1", "a"}, {"1", "b"}, {"8", "c"}, {"8", "d"}};
    for (const auto& [threads, tag] : runs) {
      const std::string out = (dir / (std::string("sweep_") + tag + ".csv")).string();
      const std::string cmd = "env -u UAV_TSPTW_THREADS '" + cli +
                              "' simulate --preset fig5 --trials 60 --seed 4242 --threads " +
                              threads + " -o '" + out + "' 2>/dev/null";
      v.require(std::system(cmd.c_str()) == 0, std::string("simulate exit status (threads ") + threads + ")");
      outputs.push_back(io::read_text_file(out));
    }
    v.detail << "CLI simulate, threads 1,1,8,8: ";
  } else {
    for (std::size_t threads : {1, 1, 8, 8}) {
      ExperimentConfig c = *preset("fig5");
      c.trials = 60;
      c.seed = 4242;
      c.threads = threads;
      outputs.push_back(io::emit_sweep_csv(run_sweep(c), false));
    }
    v.detail << "library sweep (no CLI path given), threads 1,1,8,8: ";
  }
  bool same = true;
  for (const auto& o : outputs) same = same && o == outputs[0];
  v.require(same && !outputs[0].empty(), "byte-identical CSV");
  v.detail << (same ? "identical" : "DIFFERENT") << " (" << outputs[0].size() << " bytes)";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"DP worked example", dp_worked_example},
      {"heuristic worked example", heuristic_worked_example},
      {"oracle equivalence", oracle_equivalence},
      {"convexity & gradients", convexity_and_gradients},
      {"solver optimality", solver_optimality},
      {"outage-rate contract", outage_contract},
      {"trend reproduction", trend_reproduction},
      {"complexity signatures", complexity_signatures},
      {"determinism", [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first
              << ": " << v.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
