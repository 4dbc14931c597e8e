#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hyperdisp::spherical {

// Radius of validity of the Bessel-series representation.
inline constexpr double kSeriesRadius = 1.0;

// Leading-term normalisation: c0 (s/D(s))^{1/2} script_j(0, lambda s) -> 1 as s -> 0.
inline constexpr double kSeriesNormalization = 0.90031631615710606956;  // 2 sqrt(2) / pi

enum class Method { IntegralRep, JacobiODE, BesselSeries };

struct SphericalEval {
  Method method = Method::IntegralRep;
  double tolerance = 1e-12;
  int series_terms = 1;      // M for BesselSeries
  double seed_radius = 1e-4;  // upper limit; the ODE also keeps lambda * seed <= 1e-2
};

// Radial density D(s) = sinh(2s).
double density(double s);

// (2s / sinh 2s)^{1/2}, equal to 1 at s = 0.
double leading_amplitude(double s);

// Spherical function phi_lambda(s) for real lambda.
double phi(double lambda, double s, const SphericalEval& eval = {});

// phi at imaginary spectral parameter i*mu (real valued, cosh-type).
double phi_imaginary(double mu, double s, double tolerance = 1e-13);

// Trapezoid evaluation of the integral representation at one radius, with
// node arrays cached across calls. Not thread-safe; use one per thread.
class IntegralRep {
 public:
  explicit IntegralRep(double s);
  double operator()(double lambda, double tolerance = 1e-13);
  double cosh_branch(double mu, double tolerance = 1e-13);
  double radius() const { return s_; }

 private:
  struct Level {
    std::vector<double> half_phase;  // log(A+/A-) / 2 at the new nodes
    std::vector<double> weight;      // amplitude at the new nodes
  };
  const Level& level(std::size_t l);
  template <class F>
  double evaluate(double rate, double tolerance, F&& kernel);

  double s_;
  std::size_t base_ = 16;
  std::vector<Level> levels_;
  double endpoint_phase_ = 0.0;  // half phase at w = 0 (negated at w = pi)
  double endpoint_weight_ = 1.0;
};

// phi_lambda at each radius (ascending) by integrating the radial ODE.
std::vector<double> phi_ode_profile(double lambda, std::span<const double> radii,
                                    double rtol = 1e-10, double seed_limit = 1e-4);

// Seed radius used by the ODE path for a given lambda.
double ode_seed_radius(double lambda, double seed_limit = 1e-4);

struct A1Table {
  std::vector<double> s;
  std::vector<double> a1;
  std::vector<double> second;  // natural cubic spline second derivatives
  double operator()(double radius) const;
};

// Least-squares fit of a1(s) against oracle values of phi on the given grids.
A1Table calibrate_a1(std::span<const double> s_grid, std::span<const double> lambda_grid,
                     const SphericalEval& oracle = {});

// Table on the default grids, built on first use.
const A1Table& default_a1();

struct SeriesEnvelope {
  double c0 = 0.0;  // M = 0: C s^2 (|lambda s| <= 1), C s^2 |lambda s|^{-3/2} beyond
  double c1 = 0.0;  // M = 1: C s^4, C s^4 |lambda s|^{-5/2}
};

// Constants measured by calibrate_series_envelope on the default grids.
const SeriesEnvelope& default_envelope();

struct ExpansionTerm {
  int l = 0;
  double a_l = 0.0;
  double value = 0.0;
};

std::vector<ExpansionTerm> expansion_terms(double lambda, double s, int terms, const A1Table& a1,
                                           double normalization = kSeriesNormalization);

struct SeriesValue {
  double value = 0.0;
  double error_bound = 0.0;
};

// Truncated Bessel series with M + 1 terms (M = 0 or 1), s in [0, kSeriesRadius].
SeriesValue phi_bessel_series(double lambda, double s, int M, const A1Table& a1,
                              const SeriesEnvelope& envelope,
                              double normalization = kSeriesNormalization);
SeriesValue phi_bessel_series(double lambda, double s, int M);

// The s/lambda-shape of the error envelope without its constant.
double envelope_shape(double lambda, double s, int M);

// Largest observed |phi - series| / envelope_shape over the grids.
double calibrate_series_envelope(int M, std::span<const double> s_grid,
                                 std::span<const double> lambda_grid, const A1Table& a1);

// Table of phi_lambda(s) at every (radius, lambda) pair, row-major by radius.
// Small lambda*s uses the integral representation, large lambda*s the ODE.
struct SphericalTable {
  std::vector<double> radii;
  std::vector<double> lambdas;
  std::vector<double> values;
  double operator()(std::size_t i, std::size_t k) const { return values[i * lambdas.size() + k]; }
};

SphericalTable build_table(std::span<const double> radii, std::span<const double> lambdas,
                           int workers = 1, double ode_threshold = 200.0);

}  // namespace hyperdisp::spherical
