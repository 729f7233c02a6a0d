#include "uavtw/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uavtw/energy.hpp"
#include "uavtw/error.hpp"

#ifndef UAVTW_GIT_DESCRIBE
#define UAVTW_GIT_DESCRIBE "unknown"
#endif

namespace uavtw::io {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::kParse, field + ": " + message);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ", column " +
                                       std::to_string(col) + ": malformed JSON");
  }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Reads the members of one JSON object, rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    known_.insert(key);
    return j_.at(key);
  }

  std::string field(const std::string& key) const { return join(path_, key); }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    out = as_number(j_.at(key), field(key));
  }

  // Linear key or its dB twin (offset_db added before conversion).
  void number_or_db(const std::string& key, const std::string& db_key, double& out,
                    double offset_db = 0.0) {
    const bool lin = has(key), db = has(db_key);
    if (lin && db) fail(field(key), "given both as " + key + " and " + db_key);
    if (lin) out = as_number(j_.at(key), field(key));
    if (db) out = db_to_linear(as_number(j_.at(db_key), field(db_key)) + offset_db);
  }

  void count(const std::string& key, std::size_t& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      fail(field(key), "expected a non-negative integer");
    out = v.get<std::size_t>();
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(field(key), "expected true or false");
    out = v.get<bool>();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!known_.count(key)) fail(field(key), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<double>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

Point parse_point(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) fail(field, "expected [x, y]");
  return {ObjectReader::as_number(v[0], field + "[0]"), ObjectReader::as_number(v[1], field + "[1]")};
}

void read_uav(const json& j, UavParams& u, bool& has_hover) {
  ObjectReader r(j, "uav");
  r.number("altitude_m", u.altitude_m);
  r.number("v_max", u.v_max);
  // A missing delta_v stays non-binding.
  u.delta_v = u.v_max;
  r.number("delta_v", u.delta_v);
  has_hover = r.has("v_hover");
  r.number("v_hover", u.v_hover);
  r.number("p_com_w", u.p_com_w);
  r.number("energy_budget_j", u.energy_budget_j);
  r.number("v_min", u.v_min);
  r.finish();
}

void read_channel(const json& j, ChannelParams& c) {
  ObjectReader r(j, "channel");
  r.number("bandwidth_hz", c.bandwidth_hz);
  r.number_or_db("mu0", "mu0_db", c.mu0);
  r.number("pathloss_exp", c.pathloss_exp);
  if (r.has("noise_db") && r.has("noise_dbm")) fail(r.field("noise_db"), "given twice");
  r.number_or_db("noise_w", r.has("noise_dbm") ? "noise_dbm" : "noise_db", c.noise_w,
                 r.has("noise_dbm") ? -30.0 : 0.0);
  r.number_or_db("rician_g", "rician_g_db", c.rician_g);
  r.number("epsilon", c.epsilon);
  r.finish();
}

void read_power(const json& j, PowerModelParams& p) {
  ObjectReader r(j, "power");
  r.number("p0_w", p.p0_w);
  r.number("p1_w", p.p1_w);
  r.number("alpha1", p.alpha1);
  r.number("alpha2", p.alpha2);
  r.number("alpha3", p.alpha3);
  r.finish();
}

json uav_json(const UavParams& u) {
  return {{"altitude_m", u.altitude_m}, {"v_max", u.v_max},   {"delta_v", u.delta_v},
          {"v_hover", u.v_hover},       {"p_com_w", u.p_com_w}, {"energy_budget_j", u.energy_budget_j},
          {"v_min", u.v_min}};
}

json channel_json(const ChannelParams& c) {
  return {{"bandwidth_hz", c.bandwidth_hz}, {"mu0", c.mu0},           {"pathloss_exp", c.pathloss_exp},
          {"noise_w", c.noise_w},           {"rician_g", c.rician_g}, {"epsilon", c.epsilon}};
}

json power_json(const PowerModelParams& p) {
  return {{"p0_w", p.p0_w},
          {"p1_w", p.p1_w},
          {"alpha1", p.alpha1},
          {"alpha2", p.alpha2},
          {"alpha3", p.alpha3}};
}

// 9 significant digits; NaN and infinities become null.
json num9(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

json nums9(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num9(x));
  return a;
}

json tour_json(const Tour& t) { return t.order; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json energy_json(const EnergyBreakdown& e) {
  return {{"fly_j", num9(e.fly_j)},
          {"hover_j", num9(e.hover_j)},
          {"comm_j", num9(e.comm_j)},
          {"total_j", num9(e.total_j)}};
}

json report_json(const OptimizationReport& r) {
  return {{"speeds_mps", nums9(r.profile.speeds)},
          {"completion_times_s", nums9(r.arrival_times)},
          {"energy", energy_json(r.energy)},
          {"iterations", r.iterations},
          {"kkt_residual", num9(r.kkt_residual)},
          {"converged", r.converged}};
}

}  // namespace

ScenarioData parse_scenario(std::string_view text) {
  const json j = parse_json(text);
  ScenarioData d;
  ObjectReader r(j, "");
  if (!r.has("depot")) fail("depot", "missing");
  d.depot = parse_point(r.at("depot"), "depot");

  if (!r.has("users")) fail("users", "missing");
  const json& users = r.at("users");
  if (!users.is_array()) fail("users", "expected an array");
  for (std::size_t i = 0; i < users.size(); ++i) {
    const std::string path = "users[" + std::to_string(i) + "]";
    ObjectReader u(users[i], path);
    GroundUser g;
    g.id = static_cast<int>(i + 1);
    if (u.has("id")) {
      if (!u.at("id").is_number_integer()) fail(u.field("id"), "expected an integer");
      g.id = u.at("id").get<int>();
    }
    if (!u.has("pos")) fail(u.field("pos"), "missing");
    g.position = parse_point(u.at("pos"), u.field("pos"));
    if (!u.has("q_bits")) fail(u.field("q_bits"), "missing");
    u.number("q_bits", g.data_bits);
    if (!u.has("eta_s")) fail(u.field("eta_s"), "missing");
    u.number("eta_s", g.deadline_s);
    u.finish();
    d.users.push_back(g);
  }

  if (r.has("power")) read_power(r.at("power"), d.power);
  bool has_hover = false;
  if (r.has("uav")) read_uav(r.at("uav"), d.uav, has_hover);
  if (!has_hover && d.uav.v_max > 0.0 && std::isfinite(d.uav.v_max))
    d.uav = with_hover_speed(d.uav, d.power);
  if (r.has("channel")) read_channel(r.at("channel"), d.channel);
  if (r.has("area_m")) d.area_side_m = ObjectReader::as_number(r.at("area_m"), "area_m");
  r.finish();
  return d;
}

std::string emit_scenario(const ScenarioData& d) {
  json users = json::array();
  for (const GroundUser& u : d.users) {
    users.push_back({{"id", u.id},
                     {"pos", {u.position.x, u.position.y}},
                     {"q_bits", u.data_bits},
                     {"eta_s", u.deadline_s}});
  }
  json j = {{"depot", {d.depot.x, d.depot.y}},
            {"users", users},
            {"uav", uav_json(d.uav)},
            {"channel", channel_json(d.channel)},
            {"power", power_json(d.power)}};
  if (d.area_side_m) j["area_m"] = *d.area_side_m;
  return dump(j);
}

ExperimentConfig parse_experiment_config(std::string_view text, const ExperimentConfig& base) {
  const json j = parse_json(text);
  ExperimentConfig c = base;
  ObjectReader r(j, "");
  r.count("trials", c.trials);
  r.count("k_users", c.k_users);
  r.number("area_m", c.area_m);
  r.number("eta_min_s", c.eta_min_s);
  r.number("eta_max_s", c.eta_max_s);
  r.number("data_bits", c.data_bits);
  if (r.has("depot")) c.depot = parse_point(r.at("depot"), "depot");
  r.number("depot_reference_area_m", c.depot_reference_area_m);
  if (r.has("sweep")) {
    ObjectReader s(r.at("sweep"), "sweep");
    if (s.has("parameter")) {
      const json& p = s.at("parameter");
      const auto parsed = p.is_string() ? parse_sweep_parameter(p.get<std::string>()) : std::nullopt;
      if (!parsed) fail(s.field("parameter"), "unknown sweep parameter " + p.dump());
      c.sweep = *parsed;
    }
    if (s.has("values")) {
      const json& v = s.at("values");
      if (!v.is_array()) fail(s.field("values"), "expected an array");
      c.sweep_values.clear();
      for (std::size_t i = 0; i < v.size(); ++i)
        c.sweep_values.push_back(
            ObjectReader::as_number(v[i], s.field("values") + "[" + std::to_string(i) + "]"));
    }
    s.finish();
  }
  if (r.has("seed")) {
    const json& v = r.at("seed");
    if (!v.is_number_unsigned()) fail("seed", "expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  }
  if (r.has("methods")) {
    const json& v = r.at("methods");
    if (!v.is_array()) fail("methods", "expected an array");
    c.methods.clear();
    for (const json& m : v) {
      const auto parsed = m.is_string() ? parse_plan_method(m.get<std::string>()) : std::nullopt;
      if (!parsed) fail("methods", "unknown method " + m.dump());
      c.methods.push_back(*parsed);
    }
  }
  r.count("exhaustive_psi", c.exhaustive_psi);
  r.boolean("auto_v_hover", c.auto_v_hover);
  bool has_hover = false;
  if (r.has("uav")) {
    const double delta_v = c.uav.delta_v;
    const bool binding = delta_v < c.uav.v_max;
    read_uav(r.at("uav"), c.uav, has_hover);
    // read_uav resets a missing delta_v to v_max; keep a binding base value.
    if (binding && !r.at("uav").contains("delta_v")) c.uav.delta_v = delta_v;
  }
  if (has_hover && !j.contains("auto_v_hover")) c.auto_v_hover = false;
  if (r.has("channel")) read_channel(r.at("channel"), c.channel);
  if (r.has("power")) read_power(r.at("power"), c.power);
  r.finish();
  return c;
}

std::string emit_experiment_config(const ExperimentConfig& c) {
  json methods = json::array();
  for (PlanMethod m : c.methods) methods.push_back(std::string(to_string(m)));
  json j = {{"trials", c.trials},
            {"k_users", c.k_users},
            {"area_m", c.area_m},
            {"eta_min_s", c.eta_min_s},
            {"eta_max_s", c.eta_max_s},
            {"data_bits", c.data_bits},
            {"depot", {c.depot.x, c.depot.y}},
            {"depot_reference_area_m", c.depot_reference_area_m},
            {"sweep", {{"parameter", std::string(to_string(c.sweep))}, {"values", c.sweep_values}}},
            {"seed", c.seed},
            {"methods", methods},
            {"exhaustive_psi", c.exhaustive_psi},
            {"auto_v_hover", c.auto_v_hover},
            {"uav", uav_json(c.uav)},
            {"channel", channel_json(c.channel)},
            {"power", power_json(c.power)}};
  return dump(j);
}

std::string emit_plan(const Scenario& s, const FeasiblePathSet& set, const PlanSelection& sel) {
  json candidates = json::array();
  for (std::size_t i = 0; i < set.size(); ++i) {
    candidates.push_back({{"tour", tour_json(set.tours[i])},
                          {"total_time_s", num9(set.total_times[i])},
                          {"meets_deadlines", static_cast<bool>(set.meets_deadlines[i])}});
  }
  json plan = nullptr;
  if (sel.best) {
    plan = report_json(sel.best->report);
    plan["tour"] = tour_json(sel.best->tour);
    plan["total_time_at_vmax_s"] = num9(sel.best->total_time_at_vmax);
  }
  std::vector<double> tau(s.service_times().begin() + 1, s.service_times().end());
  json j = {{"method", std::string(to_string(set.method))},
            {"status", sel.best ? "ok" : "outage"},
            {"rate_bps", num9(s.rate_bps())},
            {"service_times_s", nums9(tau)},
            {"candidates", candidates},
            {"selection",
             {{"optimized", sel.optimized},
              {"pruned", sel.pruned},
              {"over_budget", sel.over_budget},
              {"failures", sel.failures}}},
            {"plan", plan}};
  return dump(j);
}

std::string emit_optimization(const Tour& tour, const OptimizationReport& report) {
  json j = report_json(report);
  j["tour"] = tour_json(tour);
  return dump(j);
}

std::string emit_validation_report(const std::vector<ValidationIssue>& issues) {
  json list = json::array();
  for (const auto& i : issues) list.push_back({{"field", i.field}, {"message", i.message}});
  return dump({{"valid", issues.empty()}, {"issues", list}});
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string emit_sweep_csv(const std::vector<SweepPoint>& points, bool include_runtime) {
  std::string out =
      "sweep_value,method,outage_rate,energy_mean_j,energy_min_j,energy_max_j,runtime_mean_s,"
      "trials\n";
  for (const SweepPoint& p : points) {
    for (const TrialStats& st : p.stats) {
      out += format_number(p.value) + ',' + std::string(to_string(st.method)) + ',' +
             format_number(st.outage.combined) + ',' + format_number(st.energy_mean_j) + ',' +
             format_number(st.energy_min_j) + ',' + format_number(st.energy_max_j) + ',' +
             format_number(include_runtime ? st.runtime_mean_s : std::nan("")) + ',' +
             std::to_string(st.trials) + '\n';
    }
  }
  return out;
}

std::string emit_sweep_sidecar(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points) {
  json rows = json::array();
  json notes = json::array();
  for (const SweepPoint& p : points) {
    for (const TrialStats& st : p.stats) {
      rows.push_back({{"sweep_value", num9(p.value)},
                      {"method", std::string(to_string(st.method))},
                      {"infeasible_rate", num9(st.outage.infeasible_rate)},
                      {"epsilon", num9(st.outage.epsilon)},
                      {"combined_outage", num9(st.outage.combined)},
                      {"successes", st.successes},
                      {"solver_failures", st.solver_failures}});
    }
    for (std::size_t i = 0; i < p.outcomes.size(); ++i) {
      if (!p.outcomes[i].note.empty())
        notes.push_back({{"sweep_value", num9(p.value)}, {"trial", i}, {"note", p.outcomes[i].note}});
    }
  }
  json j = {{"config", json::parse(emit_experiment_config(cfg))},
            {"seed", cfg.seed},
            {"version", std::string(build_version())},
            {"rows", rows},
            {"trial_notes", notes}};
  return dump(j);
}

std::string emit_power_curve_csv(const std::vector<double>& speeds, const PowerModelParams& p) {
  std::string out = "v,p_fly_w\n";
  for (double v : speeds) out += format_number(v) + ',' + format_number(p_fly(v, p)) + '\n';
  return out;
}

std::string emit_bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "k_users,method,trials,mean_s,min_s\n";
  for (const BenchRow& r : rows) {
    out += std::to_string(r.k_users) + ',' + std::string(to_string(r.method)) + ',' +
           std::to_string(r.trials) + ',' + format_number(r.mean_s) + ',' +
           format_number(r.min_s) + '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, std::string_view content) {
  if (path == "-") {
    std::cout << content << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  out << content;
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path);
}

std::string_view build_version() noexcept { return UAVTW_GIT_DESCRIBE; }

}  // namespace uavtw::io
