#include <doctest.h>

#include <cmath>
#include <vector>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/spherical.hpp"
#include "oracles.hpp"

using namespace hyperdisp;
using spherical::Method;

TEST_SUITE("spherical") {
  TEST_CASE("integral representation matches an independent Mehler average") {
    double worst = 0.0;
    for (double lambda : {0.0, 0.7, 3.0, 11.0})
      for (double s : {0.05, 0.4, 1.0, 2.5})
        worst = std::max(worst, std::fabs(spherical::phi(lambda, s) - oracle::phi_mehler(lambda, s)));
    CHECK(worst < 1e-11);
  }

  TEST_CASE("phi at the origin and at lambda = i") {
    for (double lambda : {0.0, 2.0, 50.0}) CHECK(spherical::phi(lambda, 0.0) == 1.0);
    // -(lambda^2 + 1) vanishes at lambda = i, so phi is constant.
    for (double s : {0.1, 1.0, 3.0}) CHECK(spherical::phi_imaginary(1.0, s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spherical::phi_imaginary(0.0, 1.0) == doctest::Approx(spherical::phi(0.0, 1.0)).epsilon(1e-12));
  }

  TEST_CASE("evaluation methods agree") {
    const spherical::SphericalEval ode{Method::JacobiODE};
    for (double lambda : {0.5, 4.0, 25.0})
      for (double s : {0.2, 0.9, 2.0})
        CHECK(std::fabs(spherical::phi(lambda, s) - spherical::phi(lambda, s, ode)) < 1e-9);
  }

  TEST_CASE("phi solves the radial eigen-equation") {
    const double lambda = 3.3, h = 1e-3;
    for (double s : {0.3, 1.1, 2.0}) {
      const double fm = spherical::phi(lambda, s - h), f0 = spherical::phi(lambda, s),
                   fp = spherical::phi(lambda, s + h);
      const double lap = (fp - 2 * f0 + fm) / (h * h) + 2.0 / std::tanh(2 * s) * (fp - fm) / (2 * h);
      CHECK(std::fabs(lap + (lambda * lambda + 1) * f0) < 1e-4);
    }
  }

  TEST_CASE("leading amplitude and density") {
    CHECK(spherical::leading_amplitude(0.0) == 1.0);
    CHECK(spherical::leading_amplitude(0.7) == doctest::Approx(std::sqrt(1.4 / std::sinh(1.4))));
    CHECK(spherical::density(0.3) == doctest::Approx(std::sinh(0.6)));
    CHECK(spherical::kSeriesNormalization == doctest::Approx(2 * std::sqrt(2.0) / std::numbers::pi).epsilon(1e-16));
  }

  TEST_CASE("fitted second coefficient tracks its closed form") {
    const auto& a1 = spherical::default_a1();
    for (double s : {0.1, 0.3, 0.6, 0.9})
      CHECK(a1(s) == doctest::Approx(oracle::a1_closed(s)).epsilon(0.02));
    CHECK(oracle::a1_closed(1e-3) == doctest::Approx(1.0 / 6.0).epsilon(1e-5));
  }

  TEST_CASE("Bessel series errors sit under their envelopes") {
    for (int M : {0, 1})
      for (double s : {0.05, 0.3, 0.8})
        for (double lambda : {0.5, 5.0, 60.0}) {
          const auto v = spherical::phi_bessel_series(lambda, s, M);
          CHECK(std::fabs(v.value - spherical::phi(lambda, s)) <= v.error_bound);
        }
  }

  TEST_CASE("two-term series beats one term at small radius") {
    const double s = 0.2;
    for (double lambda : {1.0, 10.0}) {
      const double exact = spherical::phi(lambda, s);
      CHECK(std::fabs(spherical::phi_bessel_series(lambda, s, 1).value - exact) <
            std::fabs(spherical::phi_bessel_series(lambda, s, 0).value - exact));
    }
  }

  TEST_CASE("table and ODE profile reproduce pointwise values") {
    const std::vector<double> radii{0.0, 0.1, 0.5, 1.5, 3.0};
    const std::vector<double> lambdas{0.0, 1.0, 30.0, 250.0};
    const auto t = spherical::build_table(radii, lambdas, 2);
    for (std::size_t i = 0; i < radii.size(); ++i)
      for (std::size_t k = 0; k < lambdas.size(); ++k)
        CHECK(std::fabs(t(i, k) - spherical::phi(lambdas[k], radii[i])) < 1e-9);
    const auto prof = spherical::phi_ode_profile(7.0, radii);
    for (std::size_t i = 0; i < radii.size(); ++i)
      CHECK(std::fabs(prof[i] - spherical::phi(7.0, radii[i])) < 1e-8);
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(spherical::phi(1.0, -0.1), DomainError);
    CHECK_THROWS_AS(spherical::phi(std::nan(""), 0.1), DomainError);
    CHECK_THROWS_AS(spherical::phi_bessel_series(1.0, 1.5, 0), RangeError);
    CHECK_THROWS_AS(spherical::phi_bessel_series(1.0, 0.5, 2), UnsupportedError);
    const std::vector<double> bad{0.5, 0.1};
    CHECK_THROWS_AS(spherical::phi_ode_profile(1.0, bad), DomainError);
  }
}
