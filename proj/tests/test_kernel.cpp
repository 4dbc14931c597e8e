#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/kernel.hpp"
#include "hyperdisp/specfun.hpp"
#include "hyperdisp/spherical.hpp"
#include "oracles.hpp"

using namespace hyperdisp;
namespace kn = hyperdisp::kernel;

namespace {

const phases::PhaseSpec& schr() {
  static const auto p = phases::validated(phases::make_phase("schrodinger"));
  return p;
}

// Composite Simpson of the cut-off integrand with the Mehler average for phi.
std::complex<double> raw_kernel(double s, double tau, double Lambda, int n) {
  const auto& w = kn::DyadicWindow::instance();
  const double h = 2 * Lambda / n;
  std::complex<double> acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double l = i * h;
    const double c = i == 0 || i == n ? 1.0 : i % 2 ? 4.0 : 2.0;
    acc += c * w.chi(l / Lambda) * oracle::phi_mehler(l, s, 400) * std::polar(1.0, tau * (l * l + 1)) *
           std::tanh(0.5 * std::numbers::pi * l);
  }
  return acc * h / 3.0;
}

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("cutoff shape") {
    const auto& w = kn::DyadicWindow::instance();
    CHECK(w.chi(0.0) == 1.0);
    CHECK(w.chi(1.0) == 1.0);
    CHECK(w.chi(2.0) == 0.0);
    CHECK(w.chi(1.5) == doctest::Approx(0.5).epsilon(1e-12));
    double prev = 1.0;
    for (double x = 1.0; x <= 2.0; x += 0.01) {
      CHECK(w.chi(x) <= prev + 1e-15);
      prev = w.chi(x);
    }
    CHECK(w.eta(0.9) == 0.0);
    CHECK(w.eta(4.1) == 0.0);
  }

  TEST_CASE("dyadic windows form a partition of unity") {
    const auto& w = kn::DyadicWindow::instance();
    double worst = 0.0;
    for (double l = 1e-6; l < 1e3; l *= 1.0137) {
      double sum = 0.0;
      for (int j = kn::kLowestIndex; j <= 10; ++j) sum += w.eta(std::ldexp(l, -j));
      worst = std::max(worst, std::fabs(sum + w.chi(std::ldexp(l, -kn::kLowestIndex)) - w.chi(std::ldexp(l, -11))));
    }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("window derivatives agree with finite differences") {
    const auto& w = kn::DyadicWindow::instance();
    const double h = 1e-5;
    for (double x : {1.2, 1.7, 2.5, 3.6}) {
      CHECK(w.eta_derivative(x, 1) == doctest::Approx((w.eta(x + h) - w.eta(x - h)) / (2 * h)).epsilon(1e-6));
      CHECK(w.eta_derivative(x, 2) ==
            doctest::Approx((w.eta_derivative(x + h, 1) - w.eta_derivative(x - h, 1)) / (2 * h)).epsilon(1e-5));
    }
    const auto b = w.derivative_bounds();
    CHECK(b[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b[1] == doctest::Approx(2.605).epsilon(1e-3));
    CHECK(b[2] == doctest::Approx(11.04).epsilon(1e-3));
  }

  TEST_CASE("dyadic limit and J3 limit") {
    CHECK(kn::dyadic_limit(256.0) == 7);
    CHECK(kn::dyadic_limit(2.0) == 0);
    CHECK_THROWS_AS(kn::dyadic_limit(3.0), DomainError);
    CHECK_THROWS_AS(kn::dyadic_limit(1.0), DomainError);
    CHECK(kn::j3_limit(2.0, 1.0) == doctest::Approx(4.0));
    CHECK(kn::j3_limit(3.0, 2.0) == doctest::Approx(4.0));
  }

  TEST_CASE("term classes") {
    const double s = 0.125, tau = 0.25;
    CHECK(kn::classify(1, s, tau, 2.0, 1.0) == kn::TermClass::Low);
    CHECK(kn::classify(20, s, tau, 2.0, 1.0) == kn::TermClass::J1);
    CHECK(kn::classify(4, s, 1e-6, 2.0, 1.0) == kn::TermClass::J2);
    int j3 = 0;
    for (int j = 3; j < 20; ++j) j3 += kn::classify(j, s, tau, 2.0, 1.0) == kn::TermClass::J3;
    CHECK(j3 <= kn::j3_limit(2.0, 1.0));
  }

  TEST_CASE("theta split: conjugate coefficients and a frozen remainder constant") {
    for (double s : {0.1, 0.5, 0.9}) {
      const auto th = kn::theta_coefficients(s);
      CHECK(std::abs(th[2] - std::conj(th[0])) < 1e-15);
      CHECK(std::abs(th[3] - std::conj(th[1])) < 1e-15);
      // theta1 = (2s / sinh 2s)^{1/2} z1
      CHECK(std::abs(th[0] - spherical::leading_amplitude(s) * specfun::asymptotic_coeffs().z[0]) < 1e-15);
    }
    // sup |remainder| x^{5/2} over 0 < s < 1 and x > 1, measured at 0.0555
    double E = 0.0;
    for (double s : {0.02, 0.2, 0.45, 0.75, 0.98})
      for (int j = 0; j <= 12; ++j)
        for (double l : {1.1, 1.5, 1.9}) {
          const double x = std::ldexp(l, j) * s;
          if (x <= 1.0) continue;
          const auto t = kn::bessel_term_split(j, l, s);
          CHECK(t.leading() + t.remainder == doctest::Approx(spherical::phi(std::ldexp(l, j), s)).epsilon(1e-12));
          E = std::max(E, std::fabs(t.remainder) * std::pow(x, 2.5));
        }
    CHECK(E <= 0.06);
    CHECK_THROWS_AS(kn::bessel_term_split(0, 1.0, 0.5), RangeError);
    CHECK_THROWS_AS(kn::bessel_term_split(4, 1.0, 1.0), DomainError);
  }

  TEST_CASE("direct kernel matches a brute-force Simpson integral") {
    for (double tau : {0.5, -0.0625}) {
      const auto ref = raw_kernel(0.25, tau, 16.0, 20000);
      const auto I = kn::kernel_direct(0.25, tau, schr(), 16.0);
      CHECK(std::abs(I - ref) < 1e-8 * std::abs(ref));
    }
  }

  TEST_CASE("dyadic sum equals the direct integral") {
    const auto rep = kn::kernel_dyadic(0.125, 0.25, schr(), kn::dyadic_limit(128.0));
    const auto I = kn::kernel_direct(0.125, 0.25, schr(), 128.0);
    CHECK(std::abs(rep.I_total - I) < 1e-8 * std::abs(I));
    CHECK(rep.bound_product == doctest::Approx(0.125 * std::abs(rep.I_total)));
    int total = 0;
    for (int c : rep.class_counts) total += c;
    CHECK(std::size_t(total) == rep.entries.size());
  }

  TEST_CASE("conjugation symmetry in tau") {
    for (double s : {0.25, 0.0625}) {
      const auto a = kn::kernel_direct(s, 0.3, schr(), 256.0), b = kn::kernel_direct(s, -0.3, schr(), 256.0);
      CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
    }
  }

  TEST_CASE("Euclidean scaling: s I(s, c s^2) with Lambda s fixed converges as s halves") {
    // s I depends on (tau / s^2, Lambda s) up to an O(s) low-frequency correction.
    std::vector<std::complex<double>> v;
    for (int e = 4; e <= 8; ++e) {
      const double s = std::ldexp(1.0, -e);
      v.push_back(s * kn::kernel_direct(s, 8 * s * s, schr(), std::ldexp(16.0, e)));
    }
    for (std::size_t i = 2; i < v.size(); ++i) {
      const double r = std::abs(v[i] - v[i - 1]) / std::abs(v[i - 1] - v[i - 2]);
      CHECK(r == doctest::Approx(0.5).epsilon(0.1));
    }
    // Richardson limits agree
    CHECK(std::abs((2.0 * v[4] - v[3]) - (2.0 * v[3] - v[2])) < 1e-3);
  }

  TEST_CASE("sweep marks cells that exceed the node budget") {
    kn::KernelOptions o;
    o.max_nodes = 1e3;
    const std::vector<double> s{0.25}, tau{0.5}, L{256.0};
    const auto sw = kn::bound_sweep(schr(), s, tau, L, 1, o);
    REQUIRE(sw.rows.size() == 1);
    CHECK(sw.rows[0].failed);
    CHECK(sw.failures == 1);
    CHECK(!sw.rows[0].error.empty());
  }

  TEST_CASE("sweep rows are bounded and consistent across Lambda") {
    const std::vector<double> s{0.25, 0.125}, tau{0.5, -0.0625}, L{128.0, 256.0};
    const auto sw = kn::bound_sweep(schr(), s, tau, L, 2);
    CHECK(sw.failures == 0);
    CHECK(sw.rows.size() == 8);
    CHECK(sw.max_s_abs < 2.0);
    CHECK(sw.lambda_spread < 1e-6);
  }

  TEST_CASE("geodesic potential equals Shi(2) at r = 1") {
    CHECK(oracle::shi(2.0) == doctest::Approx(2.50156743335497).epsilon(1e-14));
    CHECK(std::fabs(kn::geodesic_potential(1.0) - oracle::shi(2.0)) < 1e-13);
    CHECK(std::fabs(kn::geodesic_potential(0.5) - oracle::shi(1.0)) < 1e-13);
    CHECK(kn::geodesic_potential(0.0) == 0.0);
    CHECK(std::fabs(kn::geodesic_potential(1.0, 8) - kn::geodesic_potential(1.0, 16)) < 1e-12);
  }
}
