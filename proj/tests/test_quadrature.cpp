#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hyperdisp/quadrature.hpp"

using namespace hyperdisp;

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre of order n is exact through degree 2n - 1") {
    for (int n : {4, 8, 16, 24}) {
      const auto& g = gauss_legendre(n);
      REQUIRE(g.nodes.size() == std::size_t(n));
      for (int d = 0; d <= 2 * n - 1; ++d) {
        double q = 0.0;
        for (int i = 0; i < n; ++i) q += g.weights[i] * std::pow(g.nodes[i], d);
        const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(std::fabs(q - exact) < 1e-14);
      }
    }
  }

  TEST_CASE("composite rule on graded breaks integrates exp") {
    const auto breaks = graded_breaks(3.0, 0.5, 4);
    CHECK(breaks.front() == 0.0);
    CHECK(breaks.back() == doctest::Approx(3.0));
    CHECK(breaks[1] == doctest::Approx(0.5 / 16));
    const auto ns = composite_gauss(breaks, 8);
    double q = 0.0;
    for (std::size_t i = 0; i < ns.nodes.size(); ++i) q += ns.weights[i] * std::exp(ns.nodes[i]);
    CHECK(q == doctest::Approx(std::expm1(3.0)).epsilon(1e-14));
  }

  TEST_CASE("compensated sum keeps small terms next to large ones") {
    CompensatedSum<double> s;
    s += 1e16;
    for (int i = 0; i < 1000; ++i) s += 1.0;
    s += -1e16;
    CHECK(s.value() == 1000.0);
  }

  TEST_CASE("Chebyshev panel interpolates smooth data spectrally") {
    const auto x = ChebyshevPanel::points(0.2, 1.7, 24);
    std::vector<double> v;
    for (double t : x) v.push_back(std::sin(3 * t));
    const ChebyshevPanel p(0.2, 1.7, v);
    double worst = 0.0;
    for (double t = 0.2; t <= 1.7; t += 0.0137) worst = std::max(worst, std::fabs(p(t) - std::sin(3 * t)));
    CHECK(worst < 1e-13);
  }

  TEST_CASE("Fornberg weights differentiate polynomials exactly") {
    const std::vector<double> x{-0.3, -0.1, 0.0, 0.15, 0.4};
    const auto w = fornberg_weights(0.05, x, 2);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double f = x[i] * x[i] * x[i];
      d1 += w[1][i] * f;
      d2 += w[2][i] * f;
    }
    CHECK(d1 == doctest::Approx(3 * 0.05 * 0.05).epsilon(1e-12));
    CHECK(d2 == doctest::Approx(6 * 0.05).epsilon(1e-12));
  }

  TEST_CASE("node density and regression slope") {
    std::vector<double> x;
    for (int i = 0; i <= 100; ++i) x.push_back(0.01 * i);
    CHECK(min_node_density(x) == doctest::Approx(100.0));
    CHECK(min_node_density(std::vector<double>{1.0}) == std::numeric_limits<double>::infinity());
    std::vector<double> y;
    for (double t : x) y.push_back(2.5 * t - 1.0);
    CHECK(regression_slope(x, y) == doctest::Approx(2.5).epsilon(1e-13));
  }
}
