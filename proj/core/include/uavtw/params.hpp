#pragma once

// Plain parameter records shared by every module. All quantities are SI and
// linear; dB conversions happen at the file boundary.

namespace uavtw {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct GroundUser {
  int id = 0;               // 1..K
  Point position;           // meters
  double data_bits = 0.0;   // requested content size
  double deadline_s = 0.0;  // requested timeout, measured from mission start
};

struct UavParams {
  double altitude_m = 50.0;
  double v_max = 45.0;
  // Largest speed change between consecutive hops. The default equals v_max,
  // which never binds.
  double delta_v = 45.0;
  // Circling speed while serving a user; see find_v_hover().
  double v_hover = 10.0;
  double p_com_w = 5.0;
  double energy_budget_j = 500e3;
  // Lower speed bound used in place of zero so hop times stay finite.
  double v_min = 0.1;
};

struct ChannelParams {
  double bandwidth_hz = 2e6;
  double mu0 = 1e-3;  // -30 dB reference gain
  double pathloss_exp = 2.3;
  double noise_w = 1e-14;  // -110 dBm
  double rician_g = 31.622776601683793;  // 15 dB
  double epsilon = 1e-3;
};

/// Aggregated rotary-wing constants. Defaults are built from a typical
/// rotorcraft: blade profile 79.86 W, induced 88.63 W, tip speed 120 m/s,
/// mean hover induced velocity 4.03 m/s, fuselage drag ratio 0.6, air density
/// 1.225, solidity 0.05, rotor disc area 0.503 m^2.
struct PowerModelParams {
  double p0_w = 79.86;
  double p1_w = 88.63;
  double alpha1 = 3.0 / (120.0 * 120.0);
  double alpha2 = 1.0 / (2.0 * 4.03 * 4.03);
  double alpha3 = 0.5 * 0.6 * 1.225 * 0.05 * 0.503;
};

}  // namespace uavtw
