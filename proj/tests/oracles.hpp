#pragma once

// Reference values computed independently of the library.

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

// J_0 by its power series, fine for t below ~20.
inline double j0_series(double t) {
  double term = 1.0, sum = 1.0;
  const double q = -0.25 * t * t;
  for (int k = 1; k < 200; ++k) {
    term *= q / (double(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

// First positive zero of J_0 by bisection on the series.
inline double j0_first_zero() {
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (j0_series(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Mehler-type average (1/pi) int_0^pi (cosh 2s + sinh 2s cos w)^{-(1 + i lambda)/2} dw,
// by the periodic trapezoid rule, which converges geometrically for smooth data.
inline double phi_mehler(double lambda, double s, int n = 4000) {
  const std::complex<double> e(-0.5, -0.5 * lambda);
  const double c = std::cosh(2 * s), d = std::sinh(2 * s);
  std::complex<double> acc = 0.5 * (std::pow(c + d, e) + std::pow(c - d, e));
  for (int k = 1; k < n; ++k) acc += std::pow(c + d * std::cos(std::numbers::pi * k / n), e);
  return acc.real() / n;
}

// sum_k x^{2k+1} / ((2k+1) (2k+1)!) = Shi(x).
inline double shi(double x) {
  double term = x, sum = x;
  for (int k = 1; k < 60; ++k) {
    term *= x * x / ((2.0 * k) * (2.0 * k + 1.0));
    sum += term / (2.0 * k + 1.0);
  }
  return sum;
}

// Closed form of the second series coefficient.
inline double a1_closed(double s) {
  return (2 * s / std::tanh(2 * s) - 1.0) / (8 * s * s);
}

}  // namespace oracle
