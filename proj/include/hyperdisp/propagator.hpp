#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "hyperdisp/htransform.hpp"
#include "hyperdisp/phases.hpp"

namespace hyperdisp::propagator {

using htransform::RadialProfile;
using htransform::SpectralDensity;
using htransform::SpectralGrid;

// Coefficients multiplied by exp(i t psi(lambda)).
SpectralDensity evolve(const SpectralDensity& fh, const phases::PhaseSpec& p, double t);

struct EvolutionPlan {
  phases::PhaseSpec phase;
  std::vector<double> times;  // increasing in [0, 1); t = 0 gives the initial-data column
  std::vector<double> radii;  // ascending in [0, S_max]

  // Checks the time list, radii, and that `grid` resolves exp(i t psi) phi_lambda(s).
  void validate(const SpectralGrid& grid) const;
};

struct SolutionField {
  std::vector<double> radii;
  std::vector<double> times;
  std::vector<std::complex<double>> values;  // row-major, radii x times
  std::complex<double> operator()(std::size_t i, std::size_t j) const {
    return values[i * times.size() + j];
  }
};

SolutionField solution_field(const SpectralDensity& fh, const EvolutionPlan& plan, int workers = 1);

// sup over plan.times of |u(s_i, t)|. Requires spacing * (psi variation on the
// support of fh) <= pi/4.
RadialProfile maximal_function(const SpectralDensity& fh, const EvolutionPlan& plan,
                               int workers = 1);

// Range of psi over the lambdas where fh is not negligible.
double phase_variation(const SpectralDensity& fh, const phases::PhaseSpec& p);

struct MaximalOptions {
  double ball_radius = 0.5;
  double escape_factor = 8.0;      // time window min(1, factor * R / psi'(lambda_lo))
  double radial_per_period = 2.0;  // radial nodes per 2 pi / lambda_hi
  int radial_min_nodes = 128;
  double stabilization = 0.01;     // relative L^1 change that ends refinement
  int max_refinements = 6;
  int workers = 1;
};

struct MaximalReport {
  double ratio = 0.0;
  double l1_norm = 0.0;
  double sobolev_norm = 0.0;
  double time_window = 0.0;
  std::size_t time_samples = 0;
  std::size_t radial_nodes = 0;
  std::vector<double> l1_history;  // one entry per refinement level
  double last_change = 0.0;
};

// ||S* f||_{L^1(B(o, R))} / ||f||_{H^beta}, the sup taken over a refined time grid.
MaximalReport maximal_ratio_report(const SpectralDensity& fh, const phases::PhaseSpec& p,
                                   double beta, const MaximalOptions& options = {});
double maximal_ratio(const SpectralDensity& fh, const phases::PhaseSpec& p, double beta,
                     const MaximalOptions& options = {});

// Escape time used for the time window of maximal_ratio.
double time_window(const SpectralDensity& fh, const phases::PhaseSpec& p,
                   const MaximalOptions& options);

// exp(-1/(x(1-x))) bump on [2^k, 2^{k+1}], normalised to unit H^beta norm, on a
// grid that resolves the maximal-function time window.
SpectralDensity frequency_bump(int k, const phases::PhaseSpec& p, double beta = 0.5,
                               const MaximalOptions& options = {});

// Spectral grid on [lo, hi] resolving oscillation rate t_max psi'(lambda) + s_max.
SpectralGrid resolving_grid(double lo, double hi, const phases::PhaseSpec& p, double t_max,
                            double s_max);

}  // namespace hyperdisp::propagator
