#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uavtw/experiment.hpp"
#include "uavtw/planner.hpp"
#include "uavtw/scenario.hpp"
#include "uavtw/velocity.hpp"

namespace uavtw::io {

// Scenario file (JSON). Units: meters, seconds, watts, joules, bits. Gains may
// be given in dB through `mu0_db`, `rician_g_db`, `noise_db` or `noise_dbm`
// instead of the linear key. Unknown keys are rejected.
//
//   {
//     "depot": [1.5, 398],
//     "users": [{"id": 1, "pos": [100, 200], "q_bits": 1e7, "eta_s": 30}],
//     "uav": {"v_max": 45, ...},        optional; missing v_hover is computed
//     "channel": {"rician_g_db": 15, ...},
//     "power": {"p0_w": 79.86, ...},    optional
//     "area_m": 400                     optional
//   }
//
// Parse errors carry the line number (syntax) or field path (content) and use
// ErrorKind::kParse. Invariants are not checked here; see validate().
ScenarioData parse_scenario(std::string_view text);
/// Shortest round-trip float formatting, so parse_scenario(emit_scenario(d)) == d.
std::string emit_scenario(const ScenarioData& data);

/// Experiment config (JSON). Keys override `base` (a preset or defaults):
/// trials, k_users, area_m, eta_min_s, eta_max_s, data_bits, depot,
/// depot_reference_area_m, sweep {parameter, values}, seed, methods,
/// exhaustive_psi, auto_v_hover, uav, channel, power.
ExperimentConfig parse_experiment_config(std::string_view text, const ExperimentConfig& base = {});
std::string emit_experiment_config(const ExperimentConfig& cfg);

// Results. JSON keys are sorted and floats carry 9 significant digits; the
// same input always yields the same bytes. Non-finite numbers become null.

std::string emit_plan(const Scenario& s, const FeasiblePathSet& set, const PlanSelection& sel);
std::string emit_optimization(const Tour& tour, const OptimizationReport& report);
std::string emit_validation_report(const std::vector<ValidationIssue>& issues);

/// Columns sweep_value,method,outage_rate,energy_mean_j,energy_min_j,
/// energy_max_j,runtime_mean_s,trials. outage_rate is the combined value.
/// runtime_mean_s is written as nan unless include_runtime, since wall-clock
/// time would make the file irreproducible.
std::string emit_sweep_csv(const std::vector<SweepPoint>& points, bool include_runtime);

/// Provenance for a sweep CSV: config, seed, build version and the raw
/// outage components per row.
std::string emit_sweep_sidecar(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points);

/// Columns v,p_fly_w.
std::string emit_power_curve_csv(const std::vector<double>& speeds, const PowerModelParams& p);

/// Columns k_users,method,trials,mean_s,min_s.
std::string emit_bench_csv(const std::vector<BenchRow>& rows);

/// Number as written in CSV cells: 9 significant digits, "nan"/"inf" spelled out.
std::string format_number(double v);

std::string read_text_file(const std::string& path);
/// "-" writes to stdout. Throws kIo when the file cannot be written.
void write_text(const std::string& path, std::string_view content);

/// `git describe` of the build, or "unknown".
std::string_view build_version() noexcept;

}  // namespace uavtw::io
