#pragma once

#include <array>
#include <complex>

namespace hyperdisp::specfun {

// Smallest argument accepted by the truncated Hankel expansion.
inline constexpr double kAsymptoticMin = 6.0;

// J_0 or J_1 at t >= 0. Absolute error below 1e-12 up to t = 1e3.
double bessel_j(double order, double t);

// 2^{mu-1} Gamma(1/2) Gamma(mu+1/2) J_mu(z) / z^mu, finite at z = 0.
double script_j(double order, double z);

struct AsymptoticValue {
  double value = 0.0;
  double error_bound = 0.0;
};

// Hankel expansion of J_0 with p terms in each of the cosine and sine sums.
// error_bound is the size of the first neglected pair of terms.
AsymptoticValue j0_asymptotic(double t, int terms);

// e^{+it} and e^{-it} coefficients of the two-term large-t forms
//   J_0(t)   ~ e^{it}(z1 t^{-1/2} + z2 t^{-3/2}) + e^{-it}(z3 t^{-1/2} + z4 t^{-3/2})
//   J_1(t)/t ~ e^{it} z5 t^{-3/2} + e^{-it} z6 t^{-3/2}
struct AsymptoticCoeffs {
  std::array<std::complex<double>, 6> z;  // z[0] is z1
  double t_min = kAsymptoticMin;
};

const AsymptoticCoeffs& asymptotic_coeffs();

struct TwoTermForm {
  double t = 0.0;
  std::complex<double> j0_plus, j0_minus;  // amplitudes multiplying e^{+it}, e^{-it}
  std::complex<double> j1t_plus, j1t_minus;

  double j0() const;
  double j1_over_t() const;
};

TwoTermForm complex_two_term(double t);

}  // namespace hyperdisp::specfun
