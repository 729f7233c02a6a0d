#include "uavtw/energy.hpp"

#include <cmath>
#include <numbers>

#include "uavtw/error.hpp"

namespace uavtw {
namespace {

// Golden-section minimizer of a unimodal f on [lo, hi].
template <typename F>
double golden_section(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  double best = 0.5 * (a + b);
  double f_best = f(best);
  for (double edge : {lo, hi}) {
    const double fe = f(edge);
    if (fe < f_best) {
      best = edge;
      f_best = fe;
    }
  }
  return best;
}

// sqrt(sqrt(v^-4 + a2^2) - a2), written without cancellation.
double induced_factor(double v, double a2) {
  const double inv4 = 1.0 / (v * v * v * v);
  return std::sqrt(inv4 / (std::sqrt(inv4 + a2 * a2) + a2));
}

}  // namespace

EnergyBreakdown& EnergyBreakdown::operator+=(const EnergyBreakdown& other) {
  fly_j += other.fly_j;
  hover_j += other.hover_j;
  comm_j += other.comm_j;
  total_j += other.total_j;
  return *this;
}

double p_fly(double v, const PowerModelParams& p) {
  const double x = p.alpha2 * v * v;
  // sqrt(1 + x^2) - x == 1 / (sqrt(1 + x^2) + x)
  const double induced = p.p1_w * std::sqrt(1.0 / (std::sqrt(1.0 + x * x) + x));
  return p.p0_w * (1.0 + p.alpha1 * v * v) + induced + p.alpha3 * v * v * v;
}

double find_v_hover(const PowerModelParams& p, double v_max) {
  if (!(v_max > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "find_v_hover: v_max must be positive");
  }
  return golden_section([&](double v) { return p_fly(v, p); }, 0.0, v_max, 1e-4);
}

UavParams with_hover_speed(UavParams uav, const PowerModelParams& p) {
  uav.v_hover = find_v_hover(p, uav.v_max);
  return uav;
}

double e_fly(double v, double d, const PowerModelParams& p) {
  if (d == 0.0) return 0.0;
  return p_fly(v, p) * d / v;
}

double d_e_fly(double v, double d, const PowerModelParams& p) {
  if (d == 0.0) return 0.0;
  const double a2 = p.alpha2;
  const double v2 = v * v;
  const double inv4 = 1.0 / (v2 * v2);
  const double s = std::sqrt(inv4 + a2 * a2);
  const double h = induced_factor(v, a2);
  // d/dv sqrt(w) with w = s - a2 and dw/dv = -2 v^-5 / s
  const double dh = -inv4 / (v * s * h);
  return d * (p.p0_w * (p.alpha1 - 1.0 / v2) + p.p1_w * dh + 2.0 * p.alpha3 * v);
}

double beta1(double x) {
  const double r = std::sqrt(x * x + 1.0);
  // x^2 + 1 - x r == r (r - x) == r / (r + x)
  return r / (r + x);
}

double d2_e_fly(double v, double d, const PowerModelParams& p) {
  if (d == 0.0) return 0.0;
  const double a2 = p.alpha2;
  const double v2 = v * v;
  const double v4 = v2 * v2;
  const double s = std::sqrt(a2 * a2 + 1.0 / v4);
  const double bracket = 5.0 - 2.0 / (1.0 + a2 * a2 * v4) - 1.0 / beta1(a2 * v2);
  const double beta = bracket / (v4 * v2 * s * induced_factor(v, a2));
  return 2.0 * p.p0_w * d / (v2 * v) + 2.0 * p.alpha3 * d + p.p1_w * d * beta;
}

EnergyBreakdown hop_energy(double d, double v, double tau, const UavParams& uav,
                           const PowerModelParams& p) {
  if (!(v > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "hop_energy: speed must be positive");
  }
  if (d < 0.0 || tau < 0.0) {
    throw Error(ErrorKind::kInvalidArgument,
                "hop_energy: distance and service time must be non-negative");
  }
  EnergyBreakdown e;
  e.fly_j = e_fly(v, d, p);
  e.hover_j = p_fly(uav.v_hover, p) * tau;
  e.comm_j = uav.p_com_w * tau;
  e.total_j = e.fly_j + e.hover_j + e.comm_j;
  return e;
}

double max_range_speed(const PowerModelParams& p, double v_lo, double v_hi) {
  // p_fly(v)/v is E_fly per meter, convex in v.
  return golden_section([&](double v) { return p_fly(v, p) / v; }, v_lo, v_hi,
                        1e-9);
}

}  // namespace uavtw
