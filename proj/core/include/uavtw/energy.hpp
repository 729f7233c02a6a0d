#pragma once

#include "uavtw/params.hpp"

namespace uavtw {

struct EnergyBreakdown {
  double fly_j = 0.0;
  double hover_j = 0.0;
  double comm_j = 0.0;
  double total_j = 0.0;

  EnergyBreakdown& operator+=(const EnergyBreakdown& other);
};

/// Rotary-wing propulsion power at forward speed v >= 0:
/// blade profile + induced + parasite.
double p_fly(double v, const PowerModelParams& p);

/// Speed in [0, v_max] minimizing p_fly (golden-section, 1e-4 m/s).
double find_v_hover(const PowerModelParams& p, double v_max);

/// Copy of `uav` with v_hover replaced by find_v_hover().
UavParams with_hover_speed(UavParams uav, const PowerModelParams& p);

/// Energy to fly distance d at constant speed v: p_fly(v) * d / v.
double e_fly(double v, double d, const PowerModelParams& p);

/// dE_fly/dv.
double d_e_fly(double v, double d, const PowerModelParams& p);

/// d^2E_fly/dv^2 = 2 P0 d / v^3 + 2 alpha3 d + P1 d beta(v). Positive for all
/// v > 0 (E_fly is convex in v).
double d2_e_fly(double v, double d, const PowerModelParams& p);

/// X^2 + 1 - X sqrt(X^2 + 1); bounded below by 1/2 for X >= 0.
double beta1(double x);

/// Fly + hover + communication energy of one hop of length d flown at v,
/// followed by tau seconds of service at the destination.
EnergyBreakdown hop_energy(double d, double v, double tau, const UavParams& uav,
                           const PowerModelParams& p);

/// Speed minimizing energy per meter, p_fly(v) / v, on [v_lo, v_hi].
double max_range_speed(const PowerModelParams& p, double v_lo, double v_hi);

}  // namespace uavtw
