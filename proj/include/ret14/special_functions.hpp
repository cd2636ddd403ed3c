#pragma once

namespace ret14 {

inline constexpr int kMaxBesselOrder = 10;

/// Modified Bessel function of the second kind K_n(x), integer order 0..10.
///
/// K_0 and K_1 come from the ascending series for x <= 2 and from Steed's
/// continued fraction (CF2) for x > 2; higher orders use upward recurrence,
/// which is stable for K. Throws DomainError for x <= 0 and
/// UnsupportedOrderError for n outside [0, 10].
double bessel_k(int order, double x);

/// Exponentially scaled e^x K_n(x). Finite for arguments where K_n itself
/// underflows (x up to well beyond 1e4).
double bessel_k_scaled(int order, double x);

/// G(gamma) = K_3(gamma) / K_2(gamma), the enthalpy-per-rest-energy of the
/// Juttner gas. G > 1 and decreasing.
double bessel_ratio_g(double gamma);

/// dG/dgamma = -1 - 5 G/gamma + G^2.
double bessel_ratio_g_prime(double gamma);

// G with its first two gamma-derivatives and G - 1 without cancellation.
struct BesselRatio {
  double g = 0.0;
  double g_minus_one = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Below kRatioSeriesThreshold the derivatives follow from the identity
/// G' = -1 - 5G/gamma + G^2 and G'' = 5G/gamma^2 - 5G'/gamma + 2 G G'.
/// Above it both identities cancel (to about gamma^2 eps), so G - 1, G' and
/// G'' are summed from the large-argument expansions of K_2 and K_3 and
/// their termwise derivatives.
inline constexpr double kRatioSeriesThreshold = 25.0;
BesselRatio bessel_ratio_derivatives(double gamma);

}  // namespace ret14
