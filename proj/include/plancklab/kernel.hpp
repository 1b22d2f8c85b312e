// Bessel J1 and the unit-disk plane-wave average.
//
// disk_kernel(s) is the normalised average of e(<v,y>) = exp(2*pi*i*<v,y>)
// over the unit disk, as a radial function of s = |v|:
//
//     D(s) = (1/pi) * integral_{|y|<=1} e(<v,y>) dy = 2*J1(2*pi*s)/(2*pi*s),
//
// with D(0) = 1. The 2*pi factors of the e(.) convention live here and
// nowhere else; the constant is pinned by the 2D quadrature oracle in the
// test suite.
//
// J1 uses the ascending power series for |x| <= 12 and the Hankel asymptotic
// expansion beyond; worst-case relative error is ~1e-11 near the crossover
// and improves rapidly on both sides.
#pragma once

#include <array>
#include <cmath>
#include <cstdlib>

namespace plancklab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

namespace detail {

// J1(x) = (x/2) * sum_k (-1)^k (x^2/4)^k / (k! (k+1)!)
inline double j1_series(double x) {
  const double q = 0.25 * x * x;
  double term = 0.5 * x;
  double sum = term;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (static_cast<double>(k) * static_cast<double>(k + 1));
    sum += term;
    if (std::abs(term) <= 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

// Hankel coefficients a_m = prod_{j=1..m} (4 - (2j-1)^2) / (m! 8^m) for nu=1.
inline const std::array<double, 12>& hankel_a() {
  static const std::array<double, 12> a = [] {
    std::array<double, 12> c{};
    c[0] = 1.0;
    for (int m = 1; m < 12; ++m) {
      const double odd = 2.0 * m - 1.0;
      c[m] = c[m - 1] * (4.0 - odd * odd) / (8.0 * m);
    }
    return c;
  }();
  return a;
}

// J1(x) = sqrt(2/(pi x)) * (P(x) cos chi - Q(x) sin chi), chi = x - 3 pi/4.
inline double j1_asymptotic(double x) {
  const auto& a = hankel_a();
  const double ix = 1.0 / x;
  const double ix2 = ix * ix;
  double p = 0.0, q = 0.0;
  double sign = 1.0;
  double xpow_even = 1.0;  // x^{-2k}
  for (int k = 0; k <= 5; ++k) {
    p += sign * a[2 * k] * xpow_even;
    q += sign * a[2 * k + 1] * xpow_even * ix;
    sign = -sign;
    xpow_even *= ix2;
  }
  const double chi = x - 2.356194490192344928846982537460;  // 3 pi / 4
  const double amp = std::sqrt(2.0 / (3.141592653589793238462643383279 * x));
  return amp * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

inline double bessel_j1(double x) {
  const double ax = std::abs(x);
  const double v = ax <= 12.0 ? detail::j1_series(ax) : detail::j1_asymptotic(ax);
  return x < 0.0 ? -v : v;
}

inline double disk_kernel(double s) {
  if (s < 0.0) std::abort();  // radial argument; callers pass |v|
  if (s == 0.0) return 1.0;
  const double x = kTwoPi * s;
  return 2.0 * bessel_j1(x) / x;
}

}  // namespace plancklab
