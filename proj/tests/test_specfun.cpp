#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/specfun.hpp"
#include "oracles.hpp"

using namespace hyperdisp;

TEST_SUITE("specfun") {
  TEST_CASE("bessel_j matches the standard library on [0, 1000]") {
    double worst = 0.0;
    for (int order : {0, 1})
      for (double t = 0.0; t <= 1000.0; t += t < 40.0 ? 0.037 : 1.13)
        worst = std::max(worst, std::fabs(specfun::bessel_j(order, t) - std::cyl_bessel_j(order, t)));
    CHECK(worst < 1e-12);
  }

  TEST_CASE("first zero of J0 agrees with a series root") {
    const double z = oracle::j0_first_zero();
    CHECK(z == doctest::Approx(2.404825557695773).epsilon(1e-14));
    CHECK(std::fabs(specfun::bessel_j(0, z)) < 1e-14);
  }

  TEST_CASE("script_j reduces to scaled Bessel functions") {
    const double h = 0.5 * std::numbers::pi;
    CHECK(specfun::script_j(0, 0.0) == doctest::Approx(h));
    CHECK(specfun::script_j(1, 0.0) == doctest::Approx(0.5 * h));
    for (double z : {0.3, 2.0, 17.5}) {
      CHECK(specfun::script_j(0, z) == doctest::Approx(h * std::cyl_bessel_j(0, z)).epsilon(1e-12));
      CHECK(specfun::script_j(1, z) == doctest::Approx(h * std::cyl_bessel_j(1, z) / z).epsilon(1e-12));
    }
  }

  TEST_CASE("unsupported order and negative argument are rejected") {
    CHECK_THROWS_AS(specfun::bessel_j(2, 1.0), UnsupportedError);
    CHECK_THROWS_AS(specfun::bessel_j(0, -1.0), DomainError);
    CHECK_THROWS_AS(specfun::bessel_j(0, std::nan("")), DomainError);
  }

  TEST_CASE("Hankel expansion error stays under its first neglected term") {
    for (double t : {8.0, 15.0, 40.0, 200.0})
      for (int p : {1, 2, 3}) {
        const auto a = specfun::j0_asymptotic(t, p);
        CHECK(std::fabs(a.value - std::cyl_bessel_j(0, t)) <= 2.0 * a.error_bound + 1e-14);
      }
    CHECK_THROWS_AS(specfun::j0_asymptotic(2.0, 1), RangeError);
  }

  TEST_CASE("two-term forms: conjugate pairs and t^{-5/2} accuracy") {
    const auto& c = specfun::asymptotic_coeffs();
    CHECK(std::abs(c.z[2] - std::conj(c.z[0])) < 1e-15);
    CHECK(std::abs(c.z[3] - std::conj(c.z[1])) < 1e-15);
    CHECK(std::abs(c.z[5] - std::conj(c.z[4])) < 1e-15);
    // sqrt(2/pi) e^{-i pi/4} / 2 multiplies e^{it} t^{-1/2} in J_0.
    const std::complex<double> z1 = 0.5 * std::sqrt(2.0 / std::numbers::pi) * std::polar(1.0, -0.25 * std::numbers::pi);
    CHECK(std::abs(c.z[0] - z1) < 1e-15);
    for (double t : {20.0, 50.0, 100.0, 400.0}) {
      const auto f = specfun::complex_two_term(t);
      CHECK(std::fabs(f.j0() - std::cyl_bessel_j(0, t)) < 0.1 * std::pow(t, -2.5));
      CHECK(std::fabs(f.j1_over_t() - std::cyl_bessel_j(1, t) / t) < 0.5 * std::pow(t, -2.5));
    }
  }
}
