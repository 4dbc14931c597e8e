#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/htransform.hpp"

using namespace hyperdisp;
namespace ht = hyperdisp::htransform;

namespace {

const ht::RadialProfile& grid() {
  static const auto g = ht::radial_grid(4.0, 0.25);
  return g;
}
const ht::SpectralGrid& band() {
  static const auto b = ht::SpectralGrid::composite(0.0, 40.0, 1.0);
  return b;
}

}  // namespace

TEST_SUITE("htransform") {
  TEST_CASE("Plancherel weight") {
    CHECK(ht::plancherel_weight(0.0) == 0.0);
    CHECK(ht::plancherel_weight(2.0) == doctest::Approx(2.0 * std::tanh(std::numbers::pi)));
    CHECK(ht::plancherel_weight(100.0) == doctest::Approx(100.0));
  }

  TEST_CASE("radial grid carries D(s) ds weights") {
    double q = 0.0;
    for (std::size_t i = 0; i < grid().size(); ++i) q += grid().weights[i];
    CHECK(q == doctest::Approx((std::cosh(8.0) - 1.0) / 2.0).epsilon(1e-13));
  }

  TEST_CASE("round trip and Parseval for a Gaussian") {
    const auto f = ht::sample(grid(), [](double s) { return ht::gaussian(s, 0.5); });
    const auto fh = ht::forward(f, band(), 2);
    const auto back = ht::inverse(fh, f.radii, 2);
    double diff = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) diff += f.weights[i] * std::pow(f.values[i] - back.values[i], 2);
    CHECK(std::sqrt(diff) / ht::l2_norm(f) < 1e-10);
    CHECK(ht::plancherel_norm(fh) / ht::l2_norm(f) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fh.tail_mass() < 1e-12);
  }

  TEST_CASE("Parseval holds for random mixtures") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 3; ++trial) {
      const auto g = ht::GaussianMixture::random(rng);
      for (int m = 0; m < 3; ++m) {
        CHECK(std::fabs(g.amp[m]) <= 1.0);
        CHECK(g.width[m] >= 0.3);
        CHECK(g.width[m] <= 0.8);
      }
      const auto f = ht::sample(grid(), g);
      const auto fh = ht::forward(f, band());
      CHECK(ht::plancherel_norm(fh) / ht::l2_norm(f) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("calibrated inversion constant is one half") {
    CHECK(ht::calibrate_inversion_constant(grid(), band()) == doctest::Approx(ht::kInversionConstant).epsilon(1e-9));
  }

  TEST_CASE("spectral Laplacian matches the radial operator") {
    const auto f = ht::sample(grid(), [](double s) { return ht::gaussian(s, 0.6); });
    const auto lap = ht::laplacian(f, band());
    for (std::size_t i = 0; i < f.size(); i += 7) {
      const double s = f.radii[i];
      if (s < 0.05 || s > 2.5) continue;
      const double w2 = 0.36, g = std::exp(-s * s / w2);
      const double d1 = -2 * s / w2 * g, d2 = (4 * s * s / (w2 * w2) - 2 / w2) * g;
      CHECK(std::fabs(lap.values[i] - (d2 + 2 / std::tanh(2 * s) * d1)) < 1e-8);
    }
  }

  TEST_CASE("Sobolev norms grow with beta") {
    const auto fh = ht::forward(ht::sample(grid(), [](double s) { return ht::gaussian(s, 0.4); }), band());
    CHECK(ht::sobolev_norm(fh, 0.0) == doctest::Approx(ht::plancherel_norm(fh)));
    CHECK(ht::sobolev_norm(fh, 1.0) > ht::sobolev_norm(fh, 0.5));
    CHECK_THROWS_AS(ht::sobolev_norm(fh, -1.0), DomainError);
  }

  TEST_CASE("zero data and invalid grids") {
    const auto z = ht::forward(ht::sample(grid(), [](double) { return 0.0; }), band());
    CHECK(ht::plancherel_norm(z) == 0.0);
    CHECK_THROWS_AS(ht::SpectralGrid::composite(5.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(ht::check_radial_resolution(ht::radial_grid(4.0, 2.0, 1, 4), 500.0), ResolutionError);
  }
}
