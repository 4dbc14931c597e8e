#include "hyperdisp/propagator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/parallel.hpp"
#include "hyperdisp/quadrature.hpp"
#include "hyperdisp/spherical.hpp"

namespace hyperdisp::propagator {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr std::size_t kTimeChunk = 256;
constexpr double kNegligible = 1e-14;
constexpr int kGeometricOctaves = 20;  // geometric times reach t_max 2^-20

// Indices of coefficients above kNegligible of the largest one.
std::vector<std::size_t> support(const SpectralDensity& fh) {
  double top = 0.0;
  for (const auto& c : fh.coeffs) top = std::max(top, std::abs(c));
  std::vector<std::size_t> idx;
  if (top == 0.0) return idx;
  for (std::size_t k = 0; k < fh.coeffs.size(); ++k)
    if (std::abs(fh.coeffs[k]) > kNegligible * top) idx.push_back(k);
  return idx;
}

double max_abs_dpsi(const phases::PhaseSpec& p, const SpectralGrid& grid) {
  double m = 0.0;
  for (double l : grid.nodes) m = std::max(m, std::fabs(p.dpsi(l)));
  return m;
}

// Field on a prepared table, restricted to the columns in `idx`.
class FieldEngine {
 public:
  FieldEngine(const SpectralDensity& fh, const phases::PhaseSpec& p, std::span<const double> radii,
              int workers)
      : idx_(support(fh)), nr_(radii.size()), workers_(workers) {
    std::vector<double> lambdas;
    lambdas.reserve(idx_.size());
    for (std::size_t k : idx_) {
      const double l = fh.grid.nodes[k];
      lambdas.push_back(l);
      psi_.push_back(p.psi(l));
      amp_.push_back(htransform::kInversionConstant * fh.grid.weights[k] * fh.grid.plancherel[k] *
                     fh.coeffs[k]);
    }
    if (idx_.empty()) return;
    const auto table = spherical::build_table(radii, lambdas, workers);
    phi_ = Eigen::Map<const RowMatrix>(table.values.data(), nr_, idx_.size());
  }

  // out[i * times.size() + j] = u(s_i, t_j)
  std::vector<std::complex<double>> field(std::span<const double> times) const {
    const std::size_t nt = times.size(), nl = idx_.size();
    std::vector<std::complex<double>> out(nr_ * nt);
    if (nl == 0 || nt == 0) return out;
    const std::size_t chunks = (nt + kTimeChunk - 1) / kTimeChunk;
    parallel_for(chunks, workers_, [&](std::size_t c) {
      const std::size_t j0 = c * kTimeChunk, m = std::min(kTimeChunk, nt - j0);
      Eigen::MatrixXd v(nl, 2 * m);
      for (std::size_t j = 0; j < m; ++j) {
        const double t = times[j0 + j];
        for (std::size_t k = 0; k < nl; ++k) {
          const std::complex<double> z = amp_[k] * std::polar(1.0, t * psi_[k]);
          v(k, j) = z.real();
          v(k, m + j) = z.imag();
        }
      }
      const Eigen::MatrixXd u = phi_ * v;
      for (std::size_t i = 0; i < nr_; ++i)
        for (std::size_t j = 0; j < m; ++j) out[i * nt + j0 + j] = {u(i, j), u(i, m + j)};
    });
    return out;
  }

 private:
  std::vector<std::size_t> idx_;
  std::size_t nr_;
  int workers_;
  std::vector<double> psi_;
  std::vector<std::complex<double>> amp_;
  Eigen::MatrixXd phi_;
};

void require_phase(const phases::PhaseSpec& p) {
  if (!p.psi || !p.dpsi) throw AdmissibilityError("phase is incomplete");
}

}  // namespace

SpectralDensity evolve(const SpectralDensity& fh, const phases::PhaseSpec& p, double t) {
  require_phase(p);
  SpectralDensity out = fh;
  if (t == 0.0) return out;
  for (std::size_t k = 0; k < out.coeffs.size(); ++k)
    out.coeffs[k] *= std::polar(1.0, t * p.psi(fh.grid.nodes[k]));
  return out;
}

void EvolutionPlan::validate(const SpectralGrid& grid) const {
  require_phase(phase);
  if (times.empty()) throw DomainError("evolution plan needs at least one time");
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] >= 0.0 && times[j] < 1.0))
      throw DomainError("evolution times must lie in [0, 1)");
    if (j > 0 && !(times[j] > times[j - 1])) throw DomainError("evolution times must increase");
  }
  if (radii.empty()) throw DomainError("evolution plan needs radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0) || !std::isfinite(radii[i]))
      throw DomainError("radii must be finite and non-negative");
    if (i > 0 && !(radii[i] >= radii[i - 1])) throw DomainError("radii must be ascending");
  }
  if (grid.size() < 2) return;
  const double rate = times.back() * max_abs_dpsi(phase, grid) + radii.back();
  const double per_period = min_node_density(grid.nodes) * 2.0 * std::numbers::pi / rate;
  if (per_period < htransform::kNodesPerPeriod)
    throw ResolutionError("spectral grid too coarse for t * psi' + s = " + std::to_string(rate),
                          per_period, htransform::kNodesPerPeriod);
}

SolutionField solution_field(const SpectralDensity& fh, const EvolutionPlan& plan, int workers) {
  plan.validate(fh.grid);
  const FieldEngine engine(fh, plan.phase, plan.radii, workers);
  return {plan.radii, plan.times, engine.field(plan.times)};
}

double phase_variation(const SpectralDensity& fh, const phases::PhaseSpec& p) {
  require_phase(p);
  const auto idx = support(fh);
  if (idx.empty()) return 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k : idx) {
    const double v = p.psi(fh.grid.nodes[k]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

RadialProfile maximal_function(const SpectralDensity& fh, const EvolutionPlan& plan, int workers) {
  plan.validate(fh.grid);
  double gap = 0.0;
  for (std::size_t j = 1; j < plan.times.size(); ++j)
    gap = std::max(gap, plan.times[j] - plan.times[j - 1]);
  const double variation = phase_variation(fh, plan.phase);
  if (gap * variation > 0.25 * std::numbers::pi * (1.0 + 1e-12))
    throw ResolutionError("time grid too coarse for the phase variation of the data",
                          gap * variation, 0.25 * std::numbers::pi);
  const FieldEngine engine(fh, plan.phase, plan.radii, workers);
  const auto u = engine.field(plan.times);
  RadialProfile out;
  out.radii = plan.radii;
  out.values.assign(plan.radii.size(), 0.0);
  const std::size_t nt = plan.times.size();
  for (std::size_t i = 0; i < plan.radii.size(); ++i)
    for (std::size_t j = 0; j < nt; ++j) out.values[i] = std::max(out.values[i], std::abs(u[i * nt + j]));
  return out;
}

double time_window(const SpectralDensity& fh, const phases::PhaseSpec& p,
                   const MaximalOptions& options) {
  require_phase(p);
  const auto idx = support(fh);
  if (idx.empty()) return 1.0;
  const double speed = std::fabs(p.dpsi(fh.grid.nodes[idx.front()]));
  if (!(speed > 0.0)) return 1.0;
  return std::min(1.0, options.escape_factor * options.ball_radius / speed);
}

MaximalReport maximal_ratio_report(const SpectralDensity& fh, const phases::PhaseSpec& p,
                                   double beta, const MaximalOptions& options) {
  require_phase(p);
  MaximalReport rep;
  rep.sobolev_norm = htransform::sobolev_norm(fh, beta);
  if (!(rep.sobolev_norm > 0.0)) throw DegenerateInputError("maximal ratio needs nonzero data");
  const auto idx = support(fh);
  const double lambda_hi = fh.grid.nodes[idx.back()];
  const double R = options.ball_radius;

  rep.time_window = time_window(fh, p, options);
  const double t_max = rep.time_window;

  // radial Gauss panels with D(s) ds weights
  const std::size_t per = 16;
  const double wanted = std::max<double>(options.radial_min_nodes,
                                         options.radial_per_period * lambda_hi * R / (2.0 * std::numbers::pi));
  const std::size_t panels = static_cast<std::size_t>(std::ceil(wanted / per));
  std::vector<double> breaks(panels + 1);
  for (std::size_t q = 0; q <= panels; ++q) breaks[q] = R * static_cast<double>(q) / panels;
  const NodeSet ns = composite_gauss(breaks, static_cast<int>(per));
  std::vector<double> w(ns.weights);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] *= spherical::density(ns.nodes[i]);
  rep.radial_nodes = ns.nodes.size();

  const EvolutionPlan plan{p, {t_max * (1.0 - 1e-15)}, ns.nodes};
  plan.validate(fh.grid);

  const double variation = std::max(phase_variation(fh, p), 1e-300);
  std::size_t uniform = static_cast<std::size_t>(
      std::ceil(t_max * variation / (0.25 * std::numbers::pi)));
  uniform = std::max<std::size_t>(uniform, 16);
  std::size_t geometric = 2 * kGeometricOctaves;  // exponents j / 2

  const FieldEngine engine(fh, p, ns.nodes, options.workers);
  std::vector<double> smax(ns.nodes.size(), 0.0);
  auto absorb = [&](const std::vector<double>& times) {
    const auto u = engine.field(times);
    const std::size_t nt = times.size();
    for (std::size_t i = 0; i < smax.size(); ++i)
      for (std::size_t j = 0; j < nt; ++j) smax[i] = std::max(smax[i], std::abs(u[i * nt + j]));
    rep.time_samples += nt;
  };
  auto l1 = [&] {
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i < smax.size(); ++i) acc += w[i] * smax[i];
    return acc.value();
  };

  // level 0: uniform grid (0, t_max) plus t_max 2^{-j/2}
  {
    std::vector<double> times;
    for (std::size_t i = 1; i < uniform; ++i) times.push_back(t_max * static_cast<double>(i) / uniform);
    for (std::size_t j = 1; j <= geometric; ++j)
      times.push_back(t_max * std::exp2(-0.5 * static_cast<double>(j)));
    absorb(times);
    rep.l1_history.push_back(l1());
  }
  for (int level = 1; level <= options.max_refinements; ++level) {
    // odd indices of the doubled grids are the new samples
    std::vector<double> times;
    uniform *= 2;
    geometric *= 2;
    const double gstep = static_cast<double>(2 * kGeometricOctaves) / geometric;
    for (std::size_t i = 1; i < uniform; i += 2) times.push_back(t_max * static_cast<double>(i) / uniform);
    for (std::size_t j = 1; j <= geometric; j += 2)
      times.push_back(t_max * std::exp2(-0.5 * gstep * static_cast<double>(j)));
    absorb(times);
    const double now = l1(), before = rep.l1_history.back();
    rep.l1_history.push_back(now);
    rep.last_change = now > 0.0 ? (now - before) / now : 0.0;
    if (rep.last_change < options.stabilization) break;
  }
  rep.l1_norm = rep.l1_history.back();
  rep.ratio = rep.l1_norm / rep.sobolev_norm;
  return rep;
}

double maximal_ratio(const SpectralDensity& fh, const phases::PhaseSpec& p, double beta,
                     const MaximalOptions& options) {
  return maximal_ratio_report(fh, p, beta, options).ratio;
}

SpectralGrid resolving_grid(double lo, double hi, const phases::PhaseSpec& p, double t_max,
                            double s_max) {
  require_phase(p);
  const double rate = t_max * std::max(std::fabs(p.dpsi(hi)), std::fabs(p.dpsi(lo))) + s_max;
  // 16-node panels at kNodesPerPeriod nodes per period, with a little margin
  const double width = 16.0 / (1.25 * htransform::kNodesPerPeriod) * 2.0 * std::numbers::pi / rate;
  return SpectralGrid::composite(lo, hi, std::min(width, 0.25 * (hi - lo)));
}

SpectralDensity frequency_bump(int k, const phases::PhaseSpec& p, double beta,
                               const MaximalOptions& options) {
  require_phase(p);
  if (k < 0 || k > 30) throw DomainError("bump octave must lie in [0, 30]");
  const double lo = std::ldexp(1.0, k), hi = 2.0 * lo;
  const double t_max =
      std::min(1.0, options.escape_factor * options.ball_radius / std::fabs(p.dpsi(lo)));
  SpectralDensity fh{resolving_grid(lo, hi, p, t_max, options.ball_radius), {}};
  fh.coeffs.resize(fh.grid.size());
  for (std::size_t q = 0; q < fh.grid.size(); ++q) {
    const double x = (fh.grid.nodes[q] - lo) / (hi - lo);
    fh.coeffs[q] = x > 0.0 && x < 1.0 ? std::exp(-1.0 / (x * (1.0 - x))) : 0.0;
  }
  const double norm = htransform::sobolev_norm(fh, beta);
  for (auto& c : fh.coeffs) c /= norm;
  return fh;
}

}  // namespace hyperdisp::propagator
