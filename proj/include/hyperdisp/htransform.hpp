#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "hyperdisp/spherical.hpp"

namespace hyperdisp::htransform {

// Inversion constant: f(s) = c_inv * int fhat(lambda) phi_lambda(s) lambda tanh(pi lambda / 2) dlambda.
// Value from calibrate_inversion_constant() on the reference Gaussian, 12 digits.
inline constexpr double kInversionConstant = 0.500000000000;

// Minimum quadrature nodes per period of the fastest oscillation.
inline constexpr double kNodesPerPeriod = 8.0;

// lambda tanh(pi lambda / 2)
double plancherel_weight(double lambda);

struct SpectralGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> plancherel;

  // Gauss-Legendre panels of the given width on [lo, hi].
  static SpectralGrid composite(double lo, double hi, double panel_width, int order = 16);
  double lambda_max() const { return nodes.empty() ? 0.0 : nodes.back(); }
  std::size_t size() const { return nodes.size(); }
};

struct RadialProfile {
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> weights;  // quadrature weights for D(s) ds; empty for plain samples
  double tail_mass = 0.0;       // relative spectral tail of the source when produced by inverse()

  std::size_t size() const { return radii.size(); }
  double s_max() const { return radii.empty() ? 0.0 : radii.back(); }
};

// Graded composite Gauss grid on [0, s_max] carrying D(s) ds weights.
RadialProfile radial_grid(double s_max, double panel_width, int levels = 6, int order = 16);

// Samples f on the radii of `grid`, keeping its weights.
RadialProfile sample(const RadialProfile& grid, const std::function<double(double)>& f);

struct SpectralDensity {
  SpectralGrid grid;
  std::vector<std::complex<double>> coeffs;

  // Largest index whose coefficient is above 1e-14 of the maximum, or npos if all vanish.
  std::size_t decay_index() const;
  // Share of the Plancherel mass carried by the top 10% of the band.
  double tail_mass() const;
};

// Dense phi table between a radial grid and a spectral grid, built once.
class TransformPlan {
 public:
  TransformPlan(const RadialProfile& radial, const SpectralGrid& spectral, int workers = 1);

  const spherical::SphericalTable& table() const { return table_; }
  const RadialProfile& radial() const { return radial_; }
  const SpectralGrid& spectral() const { return spectral_; }

  SpectralDensity forward(std::span<const double> values) const;
  SpectralDensity forward(std::span<const std::complex<double>> values) const;
  std::vector<std::complex<double>> inverse(const SpectralDensity& fh) const;

 private:
  RadialProfile radial_;
  SpectralGrid spectral_;
  spherical::SphericalTable table_;
};

// Checks that the radial panels resolve phi at the largest lambda of the grid.
void check_radial_resolution(const RadialProfile& f, double lambda_max);

SpectralDensity forward(const RadialProfile& f, const SpectralGrid& grid, int workers = 1);

// Real part of the reconstruction at the given radii.
RadialProfile inverse(const SpectralDensity& fh, std::span<const double> radii, int workers = 1);

// Real and imaginary parts of the reconstruction.
std::vector<std::complex<double>> inverse_complex(const SpectralDensity& fh,
                                                  std::span<const double> radii, int workers = 1);

double plancherel_norm(const SpectralDensity& fh);
double sobolev_norm(const SpectralDensity& fh, double beta);

// (int |f|^2 D ds)^{1/2} with the profile's weights.
double l2_norm(const RadialProfile& f);

// Spectral Laplacian (multiplier -(lambda^2 + 1)) evaluated on f's radii and
// cross-checked against f'' + 2 coth(2s) f' by finite differences.
RadialProfile laplacian(const RadialProfile& f, const SpectralGrid& grid, int workers = 1,
                        double tolerance = 1e-4);

// Finite-difference radial Laplacian on f's radii (9-point stencils); NaN near the ends.
std::vector<double> laplacian_fd(const RadialProfile& f);

// c such that c * inverse(forward(g)) best matches g in L^2(D ds), g the reference Gaussian.
double calibrate_inversion_constant(const RadialProfile& grid, const SpectralGrid& spectral,
                                    int workers = 1);

// exp(-s^2 / width^2)
double gaussian(double s, double width);

// sum_m amp_m exp(-s^2 / width_m^2) (1 + poly_m s^2): smooth, even in s.
struct GaussianMixture {
  std::array<double, 3> amp{}, width{}, poly{};
  double operator()(double s) const;
  // amp in [-1, 1], width in [0.3, 0.8], poly in [0, 1].
  static GaussianMixture random(std::mt19937_64& rng);
};

}  // namespace hyperdisp::htransform
