#include "ret14/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ret14/errors.hpp"

namespace ret14 {
namespace {

constexpr double kEps = 1e-17;
constexpr int kMaxIter = 10000;

struct K01 {
  double k0;
  double k1;
};

void check_args(int order, double x) {
  if (!(x > 0.0)) {
    throw DomainError("bessel_k: argument must be positive, got " + std::to_string(x));
  }
  if (order < 0 || order > kMaxBesselOrder) {
    throw UnsupportedOrderError("bessel_k: order " + std::to_string(order) +
                                " outside supported range [0, 10]");
  }
}

// Ascending series, x <= 2. Returns unscaled K_0, K_1.
//   K_0 = sum t^k/(k!)^2 [H_k - ln(x/2) - gamma_E]
//   K_1 = 1/x + (x/2) sum t^k/(k!(k+1)!) [ln(x/2) + gamma_E - (H_k + H_{k+1})/2]
// with t = x^2/4 and H_k the harmonic numbers.
K01 series_k01(double x) {
  const double t = 0.25 * x * x;
  const double lg = std::log(0.5 * x) + std::numbers::egamma;
  double term0 = 1.0;  // t^k / (k!)^2
  double term1 = 1.0;  // t^k / (k! (k+1)!)
  double harmonic = 0.0;
  double k0 = -lg;
  double k1 = lg - 0.5;
  for (int k = 1; k < kMaxIter; ++k) {
    term0 *= t / (static_cast<double>(k) * k);
    term1 *= t / (static_cast<double>(k) * (k + 1));
    const double h_next = harmonic + 1.0 / k;
    const double d0 = term0 * (h_next - lg);
    const double d1 = term1 * (lg - 0.5 * (h_next + h_next + 1.0 / (k + 1)));
    harmonic = h_next;
    k0 += d0;
    k1 += d1;
    if (std::abs(d0) < kEps * std::abs(k0) && std::abs(d1) < kEps * std::abs(k1)) break;
  }
  return {k0, 1.0 / x + 0.5 * x * k1};
}

// Steed's continued fraction CF2 (Temme/Thompson-Barnett) for order 0, x > 2.
// Returns e^x K_0, e^x K_1.
K01 cf2_scaled_k01(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  return {k0, k0 * (x + 0.5 - h) / x};
}

K01 scaled_k01(double x) {
  if (x <= 2.0) {
    const auto [k0, k1] = series_k01(x);
    const double ex = std::exp(x);
    return {k0 * ex, k1 * ex};
  }
  return cf2_scaled_k01(x);
}

}  // namespace

double bessel_k_scaled(int order, double x) {
  check_args(order, x);
  auto [km, k] = scaled_k01(x);
  if (order == 0) return km;
  for (int n = 1; n < order; ++n) {
    const double kp = km + (2.0 * n / x) * k;
    km = k;
    k = kp;
  }
  return k;
}

double bessel_k(int order, double x) {
  const double scaled = bessel_k_scaled(order, x);
  // e^-x underflows long before the scaled value overflows; split to delay it.
  if (x > 700.0) return (scaled * std::exp(-0.5 * x)) * std::exp(-0.5 * x);
  return scaled * std::exp(-x);
}

namespace {

void check_gamma(double gamma, const char* who) {
  if (!(gamma > 0.0)) {
    throw DomainError(std::string(who) + ": gamma must be positive, got " + std::to_string(gamma));
  }
}

// Large-argument expansion e^x sqrt(2x/pi) K_nu(x) ~ sum_k a_k(nu) x^-k with
// a_k = a_{k-1} (4 nu^2 - (2k-1)^2) / (8k). Returns S2, S3 - S2 and their
// first two derivatives with respect to x.
struct SeriesPair {
  double s2 = 0.0, s2_1 = 0.0, s2_2 = 0.0;
  double d = 0.0, d_1 = 0.0, d_2 = 0.0;
};

SeriesPair asymptotic_series(double x) {
  const double t = 1.0 / x;
  SeriesPair out;
  out.s2 = 1.0;
  double a2 = 1.0;
  double a3 = 1.0;
  double tk = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = (2.0 * k - 1.0) * (2.0 * k - 1.0);
    a2 *= (16.0 - odd) / (8.0 * k);
    a3 *= (36.0 - odd) / (8.0 * k);
    tk *= t;
    const double term2 = a2 * tk;
    const double termd = (a3 - a2) * tk;
    const double size = std::abs(a3 * tk) + std::abs(term2);
    if (size > last) break;  // past the smallest term of the asymptotic series
    last = size;
    out.s2 += term2;
    out.d += termd;
    // d/dx x^-k = -k x^-(k+1), d2/dx2 x^-k = k (k+1) x^-(k+2)
    out.s2_1 -= k * term2 * t;
    out.d_1 -= k * termd * t;
    out.s2_2 += k * (k + 1.0) * term2 * t * t;
    out.d_2 += k * (k + 1.0) * termd * t * t;
    if (size < 1e-18) break;
  }
  return out;
}

}  // namespace

BesselRatio bessel_ratio_derivatives(double gamma) {
  check_gamma(gamma, "bessel_ratio_derivatives");
  BesselRatio r;
  if (gamma < kRatioSeriesThreshold) {
    r.g = bessel_k_scaled(3, gamma) / bessel_k_scaled(2, gamma);
    r.g_minus_one = r.g - 1.0;
    r.d1 = -1.0 - 5.0 * r.g / gamma + r.g * r.g;
    r.d2 = 5.0 * r.g / (gamma * gamma) - 5.0 * r.d1 / gamma + 2.0 * r.g * r.d1;
    return r;
  }
  // G = 1 + D / S2 with D = S3 - S2.
  const SeriesPair s = asymptotic_series(gamma);
  const double q = s.d / s.s2;
  const double q1 = s.d_1 / s.s2 - s.d * s.s2_1 / (s.s2 * s.s2);
  const double q2 = s.d_2 / s.s2 - 2.0 * s.d_1 * s.s2_1 / (s.s2 * s.s2) -
                    s.d * s.s2_2 / (s.s2 * s.s2) +
                    2.0 * s.d * s.s2_1 * s.s2_1 / (s.s2 * s.s2 * s.s2);
  r.g_minus_one = q;
  r.g = 1.0 + q;
  r.d1 = q1;
  r.d2 = q2;
  return r;
}

double bessel_ratio_g(double gamma) {
  check_gamma(gamma, "bessel_ratio_g");
  return bessel_ratio_derivatives(gamma).g;
}

double bessel_ratio_g_prime(double gamma) {
  check_gamma(gamma, "bessel_ratio_g_prime");
  return bessel_ratio_derivatives(gamma).d1;
}

}  // namespace ret14
