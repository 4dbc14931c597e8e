#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/propagator.hpp"
#include "hyperdisp/quadrature.hpp"
#include "hyperdisp/spherical.hpp"

using namespace hyperdisp;
namespace ht = hyperdisp::htransform;
namespace pr = hyperdisp::propagator;

namespace {

const ht::SpectralDensity& gaussian_data() {
  static const auto fh = ht::forward(ht::sample(ht::radial_grid(4.0, 0.25), [](double s) { return ht::gaussian(s, 0.5); }),
                                     ht::SpectralGrid::composite(0.0, 30.0, 0.5));
  return fh;
}

}  // namespace

TEST_SUITE("propagator") {
  const auto schr = phases::validated(phases::make_phase("schrodinger"));

  TEST_CASE("evolution is unitary and a group") {
    const auto& fh = gaussian_data();
    const double n0 = ht::plancherel_norm(fh);
    for (double t : {0.01, 0.3, 0.9})
      CHECK(ht::plancherel_norm(pr::evolve(fh, schr, t)) == doctest::Approx(n0).epsilon(1e-14));
    const auto a = pr::evolve(pr::evolve(fh, schr, 0.2), schr, 0.35), b = pr::evolve(fh, schr, 0.55);
    for (std::size_t k = 0; k < fh.coeffs.size(); ++k) CHECK(std::abs(a.coeffs[k] - b.coeffs[k]) < 1e-13);
  }

  TEST_CASE("solution field matches the inverse transform of the evolved data") {
    const auto& fh = gaussian_data();
    const std::vector<double> radii{0.0, 0.2, 0.7, 1.5};
    const pr::EvolutionPlan plan{schr, {0.0, 0.05, 0.2}, radii};
    const auto u = pr::solution_field(fh, plan, 2);
    for (std::size_t j = 0; j < plan.times.size(); ++j) {
      const auto ref = ht::inverse_complex(pr::evolve(fh, schr, plan.times[j]), radii);
      for (std::size_t i = 0; i < radii.size(); ++i) CHECK(std::abs(u(i, j) - ref[i]) < 1e-12);
    }
    for (std::size_t i = 0; i < radii.size(); ++i)
      CHECK(std::abs(u(i, 0) - ht::gaussian(radii[i], 0.5)) < 1e-9);
  }

  TEST_CASE("Schrodinger field solves i u_t = Delta u") {
    // d/dt u = i (lambda^2 + 1) u spectrally, i.e. u_t = -i (Delta u).
    const auto& fh = gaussian_data();
    const std::vector<double> radii{0.3, 0.8};
    const double t = 0.1, h = 1e-4;
    const pr::EvolutionPlan plan{schr, {t - h, t, t + h}, radii};
    const auto u = pr::solution_field(fh, plan);
    ht::SpectralDensity g = pr::evolve(fh, schr, t);
    for (std::size_t k = 0; k < g.coeffs.size(); ++k) g.coeffs[k] *= std::complex<double>(0.0, schr.psi(g.grid.nodes[k]));
    const auto ref = ht::inverse_complex(g, radii);
    for (std::size_t i = 0; i < radii.size(); ++i)
      CHECK(std::abs((u(i, 2) - u(i, 0)) / (2 * h) - ref[i]) < 1e-5 * std::abs(ref[i]) + 1e-8);
  }

  TEST_CASE("plan validation") {
    const auto& fh = gaussian_data();
    CHECK_THROWS_AS(pr::solution_field(fh, {schr, {0.5, 1.0}, {0.1}}), DomainError);
    CHECK_THROWS_AS(pr::solution_field(fh, {schr, {0.5, 0.2}, {0.1}}), DomainError);
    CHECK_THROWS_AS(pr::solution_field(fh, {schr, {0.1}, {0.5, 0.1}}), DomainError);
    CHECK_THROWS_AS(pr::solution_field(fh, {schr, {0.9}, {0.1, 200.0}}), ResolutionError);
  }

  TEST_CASE("maximal function dominates every sampled time") {
    const auto& fh = gaussian_data();
    std::vector<double> times;
    const double gap = 0.2 * std::numbers::pi / pr::phase_variation(fh, schr);
    for (double t = 0.0; t < 0.05; t += gap) times.push_back(t);
    const std::vector<double> radii{0.0, 0.3, 0.6};
    const auto m = pr::maximal_function(fh, {schr, times, radii});
    const auto u = pr::solution_field(fh, {schr, times, radii});
    for (std::size_t i = 0; i < radii.size(); ++i)
      for (std::size_t j = 0; j < times.size(); ++j) CHECK(m.values[i] >= std::abs(u(i, j)));
    CHECK_THROWS_AS(pr::maximal_function(fh, {schr, {0.0, 0.5}, radii}), ResolutionError);
  }

  TEST_CASE("frequency bumps: support, normalisation and resolution") {
    for (int k : {2, 5}) {
      const auto fh = pr::frequency_bump(k, schr, 0.5);
      CHECK(ht::sobolev_norm(fh, 0.5) == doctest::Approx(1.0).epsilon(1e-13));
      for (std::size_t q = 0; q < fh.grid.size(); ++q) {
        const double l = fh.grid.nodes[q];
        if (l <= std::ldexp(1.0, k) || l >= std::ldexp(1.0, k + 1)) CHECK(fh.coeffs[q] == 0.0);
      }
      const double t_max = pr::time_window(fh, schr, {});
      CHECK(t_max <= 1.0);
      const double rate = t_max * schr.dpsi(std::ldexp(1.0, k + 1)) + 0.5;
      CHECK(min_node_density(fh.grid.nodes) * 2 * std::numbers::pi / rate >= 8.0);
    }
    CHECK_THROWS_AS(pr::frequency_bump(-1, schr), DomainError);
  }

  TEST_CASE("maximal ratio stabilises and bounds the initial L1 norm") {
    const auto fh = pr::frequency_bump(3, schr, 0.5);
    const auto rep = pr::maximal_ratio_report(fh, schr, 0.5);
    CHECK(rep.last_change < 0.01);
    CHECK(rep.l1_history.size() >= 2);
    for (std::size_t i = 1; i < rep.l1_history.size(); ++i) CHECK(rep.l1_history[i] >= rep.l1_history[i - 1]);
    // L1 norm of |f| on the ball with the same radial nodes
    const auto ns = composite_gauss(std::vector<double>{0.0, 0.125, 0.25, 0.375, 0.5}, 32);
    const auto f0 = ht::inverse_complex(fh, ns.nodes);
    double l1 = 0.0;
    for (std::size_t i = 0; i < ns.nodes.size(); ++i) l1 += ns.weights[i] * spherical::density(ns.nodes[i]) * std::abs(f0[i]);
    CHECK(rep.l1_norm >= l1 * (1 - 1e-6));
    CHECK(rep.ratio == doctest::Approx(rep.l1_norm));
  }

  TEST_CASE("zero data has no maximal ratio") {
    auto z = gaussian_data();
    for (auto& c : z.coeffs) c = 0.0;
    CHECK_THROWS_AS(pr::maximal_ratio(z, schr, 0.5), DegenerateInputError);
  }
}
