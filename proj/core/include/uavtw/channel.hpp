#pragma once

#include <cstddef>
#include <cstdint>

#include "uavtw/params.hpp"

namespace uavtw {

/// Average received SNR scale P_com * mu0 / (H^alpha * sigma^2).
double snr_gain(const ChannelParams& ch, double p_com_w, double altitude_m);

/// Standard-normal upper tail probability.
double q_function(double z);

/// Inverse of q_function on (0, 1). Rational initial guess refined with one
/// Newton step; |Q(z) - p| < 1e-12. Throws kInvalidArgument outside (0, 1).
double inverse_q(double p);

/// Rician factor at which the small-G and large-G closed forms of y_Q
/// intersect, found by bisection over (G_lo, 100] to 1e-9.
double rician_crossover(double epsilon);

/// Normalized outage threshold y_Q for the target outage probability.
///
/// Small-G branch for G <= G_0, the large-G asymptote otherwise. The large-G
/// argument of the Marcum function is sqrt(2G). Throws
/// kInfeasibleRicianRegime when sqrt(2G) <= Q^-1(eps) on the large-G branch.
double y_q(const ChannelParams& ch);

/// The two closed forms behind y_q(). The large-G one throws
/// kInfeasibleRicianRegime when sqrt(2G) <= Q^-1(eps).
double y_q_small_g(double rician_g, double epsilon);
double y_q_large_g(double rician_g, double epsilon);

/// Outage-constrained rate B log2(1 + y_Q^2 * gain / (2 (1 + G))), bits/s.
double approx_rate(const ChannelParams& ch, double gain);

/// Transmission time data_bits / rate. Throws kInvalidArgument for rate <= 0.
double service_time(double data_bits, double rate);
double service_time(const GroundUser& user, double rate);

/// First-order Marcum Q-function Q_1(x, y) for x, y >= 0.
///
/// Evaluated from the modified-Bessel series using exponentially scaled
/// Bessel values (Miller backward recurrence), so large arguments do not
/// overflow. Terms stop when one falls below 1e-15 of the partial sum; the
/// recurrence length is capped at 1e4 terms (kNumericFailure beyond).
double marcum_q1(double x, double y);

/// Exact y solving Q_1(sqrt(2G), y) = 1 - epsilon by bisection.
double marcum_y_quantile(double rician_g, double epsilon);

/// Monte-Carlo fraction of Rician draws whose rate falls below `rate`.
/// Deterministic for a given seed.
double empirical_outage(const ChannelParams& ch, double gain, double rate,
                        std::size_t samples, std::uint64_t seed);

}  // namespace uavtw
