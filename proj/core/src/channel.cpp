#include "uavtw/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "uavtw/error.hpp"

namespace uavtw {
namespace {

constexpr double kCrossoverUpper = 100.0;
constexpr double kCrossoverTol = 1e-9;
constexpr std::size_t kMarcumTermCap = 10000;

double small_g_branch(double g, double epsilon) {
  return std::sqrt(-2.0 * std::log1p(-epsilon)) * std::exp(g / 2.0);
}

// Large-G asymptote. q_inv == 0 selects the closed form without the log term.
double large_g_branch(double g, double q_inv) {
  const double s = std::sqrt(2.0 * g);
  if (q_inv == 0.0) return s + 1.0 / (2.0 * s);
  return s + std::log(s / (s - q_inv)) / (2.0 * q_inv) - q_inv;
}

// e^{-z} I_k(z) for k = 0..n, normalized through e^z = I_0 + 2 sum I_k.
std::vector<double> scaled_bessel_i(double z, std::size_t n) {
  if (z < 1.0) {
    // No overflow risk; the backward recurrence would divide by a tiny z.
    std::vector<double> v(n + 1);
    const double scale = std::exp(-z);
    for (std::size_t k = 0; k <= n; ++k) {
      v[k] = scale * std::cyl_bessel_i(static_cast<double>(k), z);
    }
    return v;
  }
  const std::size_t top = n + 20;
  std::vector<double> v(top + 2, 0.0);
  v[top] = 1.0;
  for (std::size_t k = top; k >= 1; --k) {
    v[k - 1] = v[k + 1] + (2.0 * static_cast<double>(k) / z) * v[k];
    if (v[k - 1] > 1e250) {
      for (std::size_t j = k - 1; j <= top; ++j) v[j] *= 1e-250;
    }
  }
  double norm = v[0];
  for (std::size_t k = 1; k <= top; ++k) norm += 2.0 * v[k];
  v.resize(n + 1);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

double snr_gain(const ChannelParams& ch, double p_com_w, double altitude_m) {
  return p_com_w * ch.mu0 /
         (std::pow(altitude_m, ch.pathloss_exp) * ch.noise_w);
}

double q_function(double z) {
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double inverse_q(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "inverse_q: probability must lie in (0, 1), got " +
                    std::to_string(p));
  }
  if (p == 0.5) return 0.0;

  // Acklam's rational approximation of the lower-tail normal quantile.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  // Quantile of the lower tail at probability p; Q^-1(p) is its negation.
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Newton polish on Phi(x) = p.
  const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  const double cdf = 0.5 * std::erfc(-x / std::numbers::sqrt2);
  x -= (cdf - p) / phi;
  return -x;
}

double rician_crossover(double epsilon) {
  const double q_inv = inverse_q(epsilon);
  double lo = q_inv > 0.0 ? 0.5 * q_inv * q_inv : 0.0;
  double hi = kCrossoverUpper;
  const auto gap = [&](double g) {
    return small_g_branch(g, epsilon) - large_g_branch(g, q_inv);
  };
  if (gap(hi) <= 0.0) return hi;
  while (hi - lo > kCrossoverTol) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double y_q_small_g(double rician_g, double epsilon) {
  return small_g_branch(rician_g, epsilon);
}

double y_q_large_g(double rician_g, double epsilon) {
  const double q_inv = inverse_q(epsilon);
  if (q_inv != 0.0 && std::sqrt(2.0 * rician_g) <= q_inv) {
    throw Error(ErrorKind::kInfeasibleRicianRegime,
                "y_q: sqrt(2G) must exceed Q^-1(epsilon) on the large-G branch");
  }
  return large_g_branch(rician_g, q_inv);
}

double y_q(const ChannelParams& ch) {
  if (ch.rician_g <= rician_crossover(ch.epsilon)) return small_g_branch(ch.rician_g, ch.epsilon);
  return y_q_large_g(ch.rician_g, ch.epsilon);
}

double approx_rate(const ChannelParams& ch, double gain) {
  const double y = y_q(ch);
  return ch.bandwidth_hz *
         std::log2(1.0 + y * y * gain / (2.0 * (1.0 + ch.rician_g)));
}

double service_time(double data_bits, double rate) {
  if (!(rate > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "service_time: rate must be positive");
  }
  return data_bits / rate;
}

double service_time(const GroundUser& user, double rate) {
  return service_time(user.data_bits, rate);
}

double marcum_q1(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "marcum_q1: arguments must be non-negative");
  }
  if (y == 0.0) return 1.0;
  if (x == 0.0) return std::exp(-0.5 * y * y);

  const double z = x * y;
  const double envelope = std::exp(-0.5 * (x - y) * (x - y));
  if (envelope == 0.0) return y < x ? 1.0 : 0.0;

  const auto terms = static_cast<std::size_t>(40.0 + 14.0 * std::sqrt(z));
  if (terms > kMarcumTermCap) {
    throw Error(ErrorKind::kNumericFailure,
                "marcum_q1: series exceeds the term cap");
  }
  const std::vector<double> bessel = scaled_bessel_i(z, terms);

  const bool below = y < x;
  const double ratio = below ? y / x : x / y;
  double power = below ? ratio : 1.0;
  double sum = 0.0;
  for (std::size_t k = below ? 1 : 0; k <= terms; ++k) {
    const double term = power * bessel[k];
    sum += term;
    if (term == 0.0 || term < 1e-15 * sum) break;
    power *= ratio;
  }
  const double q = below ? 1.0 - envelope * sum : envelope * sum;
  return std::clamp(q, 0.0, 1.0);
}

double marcum_y_quantile(double rician_g, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "marcum_y_quantile: epsilon must lie in (0, 1)");
  }
  const double x = std::sqrt(2.0 * rician_g);
  const double target = 1.0 - epsilon;
  double lo = 0.0;
  double hi = x + 10.0;
  while (marcum_q1(x, hi) > target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (marcum_q1(x, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double empirical_outage(const ChannelParams& ch, double gain, double rate,
                        std::size_t samples, std::uint64_t seed) {
  if (samples == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "empirical_outage: sample count must be at least 1");
  }
  // R < rate  <=>  |g|^2 < (2^{rate/B} - 1) / gain
  const double threshold = std::expm1(rate / ch.bandwidth_hz * std::numbers::ln2) / gain;
  const double los = std::sqrt(ch.rician_g / (1.0 + ch.rician_g));
  const double nlos = std::sqrt(1.0 / (1.0 + ch.rician_g));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  std::size_t outages = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double re = los + nlos * component(rng);
    const double im = nlos * component(rng);
    if (re * re + im * im < threshold) ++outages;
  }
  return static_cast<double>(outages) / static_cast<double>(samples);
}

}  // namespace uavtw
