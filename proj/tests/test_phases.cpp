#include <doctest.h>

#include <cmath>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/phases.hpp"

using namespace hyperdisp;

namespace {

double central(const phases::RealFn& f, double x, double h = 1e-4) { return (f(x + h) - f(x - h)) / (2 * h); }

}  // namespace

TEST_SUITE("phases") {
  TEST_CASE("closed-form phases") {
    const auto s = phases::make_phase("schrodinger");
    CHECK(s.psi(3.0) == doctest::Approx(10.0));
    const auto b = phases::boussinesq();
    CHECK(b.psi(1.0) == doctest::Approx(std::sqrt(2.0 * 3.0)));
    const auto m = phases::beam();
    CHECK(m.psi(1.0) == doctest::Approx(std::sqrt(5.0)));
    CHECK(phases::frac_schrodinger(1.5).psi(0.0) == doctest::Approx(1.0));
  }

  TEST_CASE("derivatives agree with finite differences") {
    for (const auto& p : {phases::frac_schrodinger(1.5), phases::frac_schrodinger(3.0), phases::boussinesq(),
                          phases::beam(), phases::custom("cubic", [](double r) { return r * r * r; }, 3.0)})
      for (double l : {0.3, 2.0, 17.0}) {
        CHECK(p.dpsi(l) == doctest::Approx(central(p.psi, l)).epsilon(1e-6));
        CHECK(p.d2psi(l) == doctest::Approx(central(p.dpsi, l)).epsilon(1e-6));
        CHECK(p.d3psi(l) == doctest::Approx(central(p.d2psi, l)).epsilon(1e-4));
      }
  }

  TEST_CASE("admissibility constants bracket the derivative ratios") {
    const auto p = phases::validated(phases::frac_schrodinger(2.0));
    CHECK(p.validated);
    for (double l = 1.5; l < 1e4; l *= 1.7) {
      CHECK(std::fabs(p.dpsi(l)) <= p.C1 * std::pow(l, p.a - 1) * (1 + 1e-6));
      CHECK(std::fabs(p.dpsi(l)) >= std::pow(l, p.a - 1) / p.C1 * (1 - 1e-6));
      CHECK(std::fabs(p.d2psi(l)) >= std::pow(l, p.a - 2) / p.C2 * (1 - 1e-6));
    }
    const auto r = phases::validate_phase(phases::beam(), 1e3, 100);
    CHECK(r.trend1 == doctest::Approx(0.0).epsilon(0.05));
  }

  TEST_CASE("inadmissible and unknown phases") {
    CHECK_THROWS_AS(phases::frac_schrodinger(1.0), AdmissibilityError);
    CHECK_THROWS_AS(phases::make_phase("wave"), UsageError);
    // psi' decays like lambda^{-1}: no power law lambda^{a-1} with a > 1 fits.
    const auto bad = phases::custom("log", [](double r) { return std::log(r); }, 2.0);
    CHECK_THROWS_AS(phases::validate_phase(bad, 1e4, 200), AdmissibilityError);
  }
}
