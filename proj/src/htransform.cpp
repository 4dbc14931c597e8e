#include "hyperdisp/htransform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/parallel.hpp"
#include "hyperdisp/quadrature.hpp"

namespace hyperdisp::htransform {
namespace {

constexpr double kTailWarning = 1e-16;

std::complex<double> csum(CompensatedSum<double>& re, CompensatedSum<double>& im) {
  return {re.value(), im.value()};
}

}  // namespace

double plancherel_weight(double lambda) {
  const double x = 0.5 * std::numbers::pi * std::fabs(lambda);
  return std::fabs(lambda) * (x > 40.0 ? 1.0 : std::tanh(x));
}

double gaussian(double s, double width) { return std::exp(-(s * s) / (width * width)); }

double GaussianMixture::operator()(double s) const {
  double v = 0.0;
  for (std::size_t m = 0; m < amp.size(); ++m) v += amp[m] * gaussian(s, width[m]) * (1.0 + poly[m] * s * s);
  return v;
}

GaussianMixture GaussianMixture::random(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(-1.0, 1.0), w(0.3, 0.8), p(0.0, 1.0);
  GaussianMixture g;
  for (std::size_t m = 0; m < g.amp.size(); ++m) {
    g.amp[m] = a(rng);
    g.width[m] = w(rng);
    g.poly[m] = p(rng);
  }
  return g;
}

SpectralGrid SpectralGrid::composite(double lo, double hi, double panel_width, int order) {
  if (!(lo >= 0.0) || !(hi > lo) || !(panel_width > 0.0))
    throw DomainError("spectral grid needs 0 <= lo < hi and a positive panel width");
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width - 1e-12)));
  std::vector<double> breaks(panels + 1);
  for (int p = 0; p <= panels; ++p) breaks[p] = lo + (hi - lo) * p / panels;
  const NodeSet ns = composite_gauss(breaks, order);
  SpectralGrid g;
  g.nodes = ns.nodes;
  g.weights = ns.weights;
  g.plancherel.reserve(g.nodes.size());
  for (double l : g.nodes) g.plancherel.push_back(plancherel_weight(l));
  return g;
}

RadialProfile radial_grid(double s_max, double panel_width, int levels, int order) {
  const auto breaks = graded_breaks(s_max, panel_width, levels);
  const NodeSet ns = composite_gauss(breaks, order);
  RadialProfile p;
  p.radii = ns.nodes;
  p.weights = ns.weights;
  for (std::size_t i = 0; i < p.radii.size(); ++i) p.weights[i] *= spherical::density(p.radii[i]);
  p.values.assign(p.radii.size(), 0.0);
  return p;
}

RadialProfile sample(const RadialProfile& grid, const std::function<double(double)>& f) {
  RadialProfile p = grid;
  for (std::size_t i = 0; i < p.radii.size(); ++i) p.values[i] = f(p.radii[i]);
  return p;
}

std::size_t SpectralDensity::decay_index() const {
  double top = 0.0;
  for (const auto& c : coeffs) top = std::max(top, std::abs(c));
  if (top == 0.0) return static_cast<std::size_t>(-1);
  std::size_t last = 0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (std::abs(coeffs[k]) > 1e-14 * top) last = k;
  return last;
}

double SpectralDensity::tail_mass() const {
  const std::size_t n = coeffs.size();
  if (n == 0) return 0.0;
  const double lo = grid.nodes.front(), hi = grid.nodes.back();
  const double cut = hi - 0.1 * (hi - lo);
  CompensatedSum<double> all, tail;
  for (std::size_t k = 0; k < n; ++k) {
    const double m = grid.weights[k] * grid.plancherel[k] * std::norm(coeffs[k]);
    all += m;
    if (grid.nodes[k] >= cut) tail += m;
  }
  return all.value() > 0.0 ? tail.value() / all.value() : 0.0;
}

void check_radial_resolution(const RadialProfile& f, double lambda_max) {
  if (f.radii.size() < 2 || lambda_max <= 0.0) return;
  const double density = min_node_density(f.radii);
  const double per_period = density * 2.0 * std::numbers::pi / lambda_max;
  if (per_period < kNodesPerPeriod)
    throw ResolutionError("radial grid too coarse for lambda_max = " + std::to_string(lambda_max),
                          per_period, kNodesPerPeriod);
}

TransformPlan::TransformPlan(const RadialProfile& radial, const SpectralGrid& spectral, int workers)
    : radial_(radial), spectral_(spectral) {
  if (radial_.weights.size() != radial_.radii.size())
    throw DomainError("transform plan needs a radial profile with quadrature weights");
  check_radial_resolution(radial_, spectral_.lambda_max());
  table_ = spherical::build_table(radial_.radii, spectral_.nodes, workers);
}

SpectralDensity TransformPlan::forward(std::span<const double> values) const {
  if (values.size() != radial_.radii.size()) throw DomainError("profile size mismatch");
  SpectralDensity out{spectral_, std::vector<std::complex<double>>(spectral_.size())};
  const std::size_t nk = spectral_.size();
  for (std::size_t k = 0; k < nk; ++k) {
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i < values.size(); ++i)
      acc += radial_.weights[i] * values[i] * table_.values[i * nk + k];
    out.coeffs[k] = acc.value();
  }
  return out;
}

SpectralDensity TransformPlan::forward(std::span<const std::complex<double>> values) const {
  if (values.size() != radial_.radii.size()) throw DomainError("profile size mismatch");
  SpectralDensity out{spectral_, std::vector<std::complex<double>>(spectral_.size())};
  const std::size_t nk = spectral_.size();
  for (std::size_t k = 0; k < nk; ++k) {
    CompensatedSum<double> re, im;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double w = radial_.weights[i] * table_.values[i * nk + k];
      re += w * values[i].real();
      im += w * values[i].imag();
    }
    out.coeffs[k] = csum(re, im);
  }
  return out;
}

std::vector<std::complex<double>> TransformPlan::inverse(const SpectralDensity& fh) const {
  if (fh.coeffs.size() != spectral_.size()) throw DomainError("spectral size mismatch");
  const std::size_t nk = spectral_.size();
  std::vector<std::complex<double>> out(radial_.radii.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CompensatedSum<double> re, im;
    for (std::size_t k = 0; k < nk; ++k) {
      const double w = spectral_.weights[k] * spectral_.plancherel[k] * table_.values[i * nk + k];
      re += w * fh.coeffs[k].real();
      im += w * fh.coeffs[k].imag();
    }
    out[i] = kInversionConstant * csum(re, im);
  }
  return out;
}

SpectralDensity forward(const RadialProfile& f, const SpectralGrid& grid, int workers) {
  if (f.weights.size() != f.radii.size() || f.values.size() != f.radii.size())
    throw DomainError("forward transform needs values and quadrature weights on every radius");
  for (double v : f.values)
    if (!std::isfinite(v)) throw DomainError("profile values must be finite");
  check_radial_resolution(f, grid.lambda_max());
  const auto table = spherical::build_table(f.radii, grid.nodes, workers);
  SpectralDensity out{grid, std::vector<std::complex<double>>(grid.size())};
  const std::size_t nk = grid.size();
  parallel_for(nk, workers, [&](std::size_t k) {
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i < f.radii.size(); ++i)
      acc += f.weights[i] * f.values[i] * table.values[i * nk + k];
    out.coeffs[k] = acc.value();
  });
  return out;
}

std::vector<std::complex<double>> inverse_complex(const SpectralDensity& fh,
                                                  std::span<const double> radii, int workers) {
  if (fh.coeffs.size() != fh.grid.size()) throw DomainError("spectral size mismatch");
  std::vector<std::complex<double>> out(radii.size());
  bool any = false;
  for (const auto& c : fh.coeffs) any = any || c != 0.0;
  if (!any) return out;
  const auto table = spherical::build_table(radii, fh.grid.nodes, workers);
  const std::size_t nk = fh.grid.size();
  parallel_for(radii.size(), workers, [&](std::size_t i) {
    CompensatedSum<double> re, im;
    for (std::size_t k = 0; k < nk; ++k) {
      const double w = fh.grid.weights[k] * fh.grid.plancherel[k] * table.values[i * nk + k];
      re += w * fh.coeffs[k].real();
      im += w * fh.coeffs[k].imag();
    }
    out[i] = kInversionConstant * csum(re, im);
  });
  return out;
}

RadialProfile inverse(const SpectralDensity& fh, std::span<const double> radii, int workers) {
  const auto u = inverse_complex(fh, radii, workers);
  RadialProfile p;
  p.radii.assign(radii.begin(), radii.end());
  p.values.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) p.values[i] = u[i].real();
  const double tail = fh.tail_mass();
  p.tail_mass = tail > kTailWarning ? tail : 0.0;
  return p;
}

double plancherel_norm(const SpectralDensity& fh) { return sobolev_norm(fh, 0.0); }

double sobolev_norm(const SpectralDensity& fh, double beta) {
  if (!(beta >= 0.0)) throw DomainError("Sobolev index must be >= 0");
  CompensatedSum<double> acc;
  for (std::size_t k = 0; k < fh.coeffs.size(); ++k) {
    const double l = fh.grid.nodes[k];
    const double w = beta == 0.0 ? 1.0 : std::pow(l * l + 1.0, beta);
    acc += fh.grid.weights[k] * fh.grid.plancherel[k] * w * std::norm(fh.coeffs[k]);
  }
  return std::sqrt(kInversionConstant * acc.value());
}

double l2_norm(const RadialProfile& f) {
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < f.values.size(); ++i) acc += f.weights[i] * f.values[i] * f.values[i];
  return std::sqrt(acc.value());
}

std::vector<double> laplacian_fd(const RadialProfile& f) {
  const std::size_t n = f.radii.size();
  constexpr std::size_t half = 4;
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = half; i + half < n; ++i) {
    const std::span<const double> x(f.radii.data() + i - half, 2 * half + 1);
    const auto w = fornberg_weights(f.radii[i], x, 2);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      d1 += w[1][j] * f.values[i - half + j];
      d2 += w[2][j] * f.values[i - half + j];
    }
    out[i] = d2 + 2.0 / std::tanh(2.0 * f.radii[i]) * d1;
  }
  return out;
}

RadialProfile laplacian(const RadialProfile& f, const SpectralGrid& grid, int workers,
                        double tolerance) {
  SpectralDensity fh = forward(f, grid, workers);
  for (std::size_t k = 0; k < fh.coeffs.size(); ++k) {
    const double l = grid.nodes[k];
    fh.coeffs[k] *= -(l * l + 1.0);
  }
  RadialProfile out = inverse(fh, f.radii, workers);
  out.weights = f.weights;

  const auto fd = laplacian_fd(f);
  const double s_lo = 0.05, s_hi = 0.8 * f.s_max();
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    if (std::isnan(fd[i]) || f.radii[i] < s_lo || f.radii[i] > s_hi) continue;
    scale = std::max(scale, std::fabs(out.values[i]));
    worst = std::max(worst, std::fabs(out.values[i] - fd[i]));
  }
  if (scale > 0.0 && worst > tolerance * scale)
    throw ConsistencyError("spectral and finite-difference Laplacians disagree", worst / scale);
  return out;
}

double calibrate_inversion_constant(const RadialProfile& grid, const SpectralGrid& spectral,
                                    int workers) {
  const RadialProfile g = sample(grid, [](double s) { return gaussian(s, 0.5); });
  const SpectralDensity gh = forward(g, spectral, workers);
  const RadialProfile h = inverse(gh, g.radii, workers);
  CompensatedSum<double> gh_dot, hh;
  for (std::size_t i = 0; i < g.radii.size(); ++i) {
    const double hv = h.values[i] / kInversionConstant;
    gh_dot += g.weights[i] * g.values[i] * hv;
    hh += g.weights[i] * hv * hv;
  }
  if (!(hh.value() > 0.0)) throw CalibrationError("reference reconstruction vanished");
  return gh_dot.value() / hh.value();
}

}  // namespace hyperdisp::htransform
