#include "hyperdisp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/htransform.hpp"
#include "hyperdisp/kernel.hpp"
#include "hyperdisp/phases.hpp"
#include "hyperdisp/propagator.hpp"
#include "hyperdisp/quadrature.hpp"
#include "hyperdisp/specfun.hpp"
#include "hyperdisp/spherical.hpp"

namespace hyperdisp::acceptance {
namespace {

using htransform::RadialProfile;
using htransform::SpectralGrid;

std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Grids shared by the transform and propagator suites.
RadialProfile radial() { return htransform::radial_grid(4.0, 0.25); }
SpectralGrid spectral() { return SpectralGrid::composite(0.0, 40.0, 1.0); }

double reference_profile(double s) {
  return std::exp(-s * s / 0.36) * (1.0 + s * s) + 0.3 * std::exp(-s * s / 0.2) * s * s;
}

// Relative L^2(D ds) distance between two profiles on the same grid.
double relative_l2(const RadialProfile& f, std::span<const double> g) {
  CompensatedSum<double> num, den;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f.values[i] - g[i];
    num += f.weights[i] * d * d;
    den += f.weights[i] * f.values[i] * f.values[i];
  }
  return den.value() > 0.0 ? std::sqrt(num.value() / den.value()) : std::sqrt(num.value());
}

// ---------------------------------------------------------------------------

Result spherical_suite(const Options&) {
  Result r{1, "spherical functions", false, {}, 0.0};
  std::vector<double> lambdas, radii;
  for (int i = 0; i <= 40; ++i) lambdas.push_back(2.5 * i);
  for (int k = 0; k <= 30; ++k) radii.push_back(0.1 * k);

  bool origin_exact = true;
  double overshoot = 0.0, odd = 0.0, disagreement = 0.0;
  std::vector<std::vector<double>> ode(lambdas.size());
  const std::vector<double> inner(radii.begin() + 1, radii.end());
  for (std::size_t i = 0; i < lambdas.size(); ++i) ode[i] = spherical::phi_ode_profile(lambdas[i], inner);

  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double s = radii[k];
    spherical::IntegralRep rep(s);
    const double envelope = spherical::phi(0.0, s);  // |phi_lambda(s)| <= phi_0(s)
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double l = lambdas[i];
      const double v = spherical::phi(l, s);
      if (s == 0.0) {
        origin_exact = origin_exact && v == 1.0;
        continue;
      }
      overshoot = std::max(overshoot, std::fabs(v) - 1.0);
      odd = std::max(odd, std::fabs(v - spherical::phi(-l, s)));
      odd = std::max(odd, std::fabs(rep(l) - rep(-l)));
      disagreement = std::max(disagreement, std::fabs(v - ode[i][k - 1]) / envelope);
    }
  }
  r.pass = origin_exact && overshoot <= 1e-8 && odd <= 1e-10 && disagreement <= 1e-6;
  r.detail = fmt("phi(0)=1 %s, max|phi|-1=%.2e (<=1e-8), even dev=%.2e (<=1e-10), "
                 "rep vs ode=%.2e (<=1e-6, relative to phi_0(s))",
                 origin_exact ? "exact" : "NOT exact", overshoot, odd, disagreement);
  return r;
}

Result series_order(const Options& o) {
  Result r{2, "Bessel series order (M=0)", false, {}, 0.0};
  const double c0 = spherical::kSeriesNormalization * (o.inject_fault == "c0" ? 1.01 : 1.0);
  const auto& a1 = spherical::default_a1();
  const auto& env = spherical::default_envelope();
  auto err = [&](spherical::IntegralRep& rep, double lambda) {
    const double s = rep.radius();
    return std::fabs(rep(lambda) - spherical::phi_bessel_series(lambda, s, 0, a1, env, c0).value);
  };

  std::vector<double> ls, le;
  for (double s : {0.4, 0.2, 0.1, 0.05}) {
    spherical::IntegralRep rep(s);
    double worst = 0.0;
    for (int i = 1; i <= 40; ++i) worst = std::max(worst, err(rep, (i / 40.0) / s));
    ls.push_back(std::log(s));
    le.push_back(std::log(worst));
  }
  const double slope_small = regression_slope(ls, le);

  // error envelope over one period 2 pi in lambda s, at 24 log-spaced centres
  const double s = 0.2;
  spherical::IntegralRep rep(s);
  std::vector<double> lx, ly;
  for (int c = 0; c < 24; ++c) {
    const double x0 = 2.0 * std::pow((200.0 - 2.0 * std::numbers::pi) / 2.0, c / 23.0);
    double worst = 0.0;
    for (int q = 0; q <= 32; ++q) {
      const double x = x0 + 2.0 * std::numbers::pi * q / 32.0;
      worst = std::max(worst, err(rep, x / s));
    }
    lx.push_back(std::log(x0));
    ly.push_back(std::log(worst));
  }
  const double slope_large = regression_slope(lx, ly);
  r.pass = slope_small >= 1.8 && std::fabs(slope_large + 1.5) <= 0.25;
  r.detail = fmt("slope in s for |lambda s|<=1: %.3f (>=1.8); slope in lambda s over [2,200]: %.3f "
                 "(-1.5 +- 0.25)%s",
                 slope_small, slope_large, o.inject_fault == "c0" ? "; c0 perturbed by 1%" : "");
  return r;
}

Result bessel_asymptotics(const Options&) {
  Result r{3, "Bessel asymptotics", false, {}, 0.0};
  std::vector<double> scaled(200), t(200);
  for (int k = 0; k < 200; ++k) {
    t[k] = 10.0 * std::pow(1e3, k / 199.0);
    const auto f = specfun::complex_two_term(t[k]);
    scaled[k] = std::pow(t[k], 2.5) * std::fabs(specfun::bessel_j(0, t[k]) - f.j0());
  }
  // block maxima remove the zeros of the oscillating remainder
  std::vector<double> bx, by;
  for (int b = 0; b < 10; ++b) {
    double m = 0.0;
    for (int k = 20 * b; k < 20 * b + 20; ++k) m = std::max(m, scaled[k]);
    bx.push_back(std::log(t[20 * b + 10]));
    by.push_back(std::log(m));
  }
  const double trend = regression_slope(bx, by);
  const double bound = *std::max_element(scaled.begin(), scaled.end());
  const auto& z = specfun::asymptotic_coeffs().z;
  const double conj_dev = std::abs(z[2] - std::conj(z[0]));
  const double mod_dev = std::fabs(std::abs(z[0]) - 1.0 / std::sqrt(2.0 * std::numbers::pi));
  r.pass = bound <= 0.1 && trend <= 0.05 && conj_dev <= 1e-12 && mod_dev <= 1e-12;
  r.detail = fmt("max t^2.5|J0-two term|=%.4f (<=0.1), block-max trend=%.4f (<=0.05), "
                 "|z3-conj z1|=%.1e, ||z1|-1/sqrt(2pi)|=%.1e (<=1e-12)",
                 bound, trend, conj_dev, mod_dev);
  return r;
}

Result transform_suite(const Options& o) {
  Result r{4, "transform", false, {}, 0.0};
  const RadialProfile grid = radial();
  const SpectralGrid sg = spectral();
  const double c = htransform::calibrate_inversion_constant(grid, sg, o.workers);

  const RadialProfile g = htransform::sample(grid, reference_profile);
  const auto gh = htransform::forward(g, sg, o.workers);
  const auto back = htransform::inverse(gh, g.radii, o.workers);
  const double round_trip = relative_l2(g, back.values);

  std::mt19937_64 rng(o.seed);
  double lo = INFINITY, hi = -INFINITY;
  for (int p = 0; p < 5; ++p) {
    const RadialProfile f = htransform::sample(grid, htransform::GaussianMixture::random(rng));
    const double ratio = htransform::plancherel_norm(htransform::forward(f, sg, o.workers)) /
                         htransform::l2_norm(f);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }

  const RadialProfile lap = htransform::laplacian(g, sg, o.workers, 1.0);
  const auto fd = htransform::laplacian_fd(g);
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    if (std::isnan(fd[i]) || g.radii[i] < 0.05 || g.radii[i] > 0.8 * g.s_max()) continue;
    scale = std::max(scale, std::fabs(lap.values[i]));
    worst = std::max(worst, std::fabs(lap.values[i] - fd[i]));
  }
  const double lap_rel = worst / scale;
  r.pass = round_trip <= 1e-5 && hi - lo <= 1e-8 && lap_rel <= 1e-4;
  r.detail = fmt("c_inv calibrated %.12f (used %.12f), round trip %.2e (<=1e-5), Parseval ratio "
                 "in [%.12f, %.12f] spread %.1e (<=1e-8), Laplacian %.2e (<=1e-4)",
                 c, htransform::kInversionConstant, round_trip, lo, hi, hi - lo, lap_rel);
  return r;
}

Result propagator_suite(const Options& o) {
  Result r{5, "propagator", false, {}, 0.0};
  const RadialProfile grid = radial();
  const SpectralGrid sg = spectral();
  const RadialProfile f = htransform::sample(grid, [](double s) { return htransform::gaussian(s, 0.5); });
  const auto fh = htransform::forward(f, sg, o.workers);

  double drift = 0.0, group = 0.0, top = 0.0;
  for (const auto& c : fh.coeffs) top = std::max(top, std::abs(c));
  for (const char* name : {"schrodinger", "boussinesq", "beam"}) {
    const auto p = phases::validated(phases::make_phase(name));
    const double base = htransform::plancherel_norm(fh);
    for (int k = 1; k <= 9; ++k)
      drift = std::max(drift, std::fabs(htransform::plancherel_norm(propagator::evolve(fh, p, 0.1 * k)) / base - 1.0));
    const auto twice = propagator::evolve(propagator::evolve(fh, p, 0.3), p, 0.45);
    const auto once = propagator::evolve(fh, p, 0.75);
    for (std::size_t k = 0; k < fh.coeffs.size(); ++k)
      group = std::max(group, std::abs(twice.coeffs[k] - once.coeffs[k]) / top);
  }

  const auto p = phases::validated(phases::frac_schrodinger(2.0));
  propagator::EvolutionPlan plan{p, {0.0}, grid.radii};
  for (int k = 7; k >= 0; --k) plan.times.push_back(1e-3 * std::ldexp(1.0, -k));
  const auto field = propagator::solution_field(fh, plan, o.workers);
  std::vector<double> lt, le;
  const std::size_t nt = plan.times.size();
  CompensatedSum<double> ref;
  for (std::size_t i = 0; i < grid.size(); ++i) ref += grid.weights[i] * std::norm(field(i, 0));
  for (std::size_t j = 1; j < nt; ++j) {
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i < grid.size(); ++i)
      acc += grid.weights[i] * std::norm(field(i, j) - field(i, 0));
    lt.push_back(std::log(plan.times[j]));
    le.push_back(0.5 * std::log(acc.value() / ref.value()));
  }
  const double order = regression_slope(lt, le);
  r.pass = drift <= 1e-10 && group <= 1e-12 && order >= 0.98;
  r.detail = fmt("unitarity drift %.1e (<=1e-10), group law %.1e (<=1e-12), recovery order %.4f (>=0.98)",
                 drift, group, order);
  return r;
}

Result kernel_dual_path(const Options&) {
  Result r{6, "kernel dual path", false, {}, 0.0};
  const auto p = phases::validated(phases::frac_schrodinger(2.0));
  const double Lambda = 1024.0;
  double worst = 0.0;
  for (double s : {0.5, 0.25, 0.125})
    for (double tau : {0.9, 0.1, 0.01, -0.1}) {
      const auto direct = kernel::kernel_direct(s, tau, p, Lambda);
      const auto dyadic = kernel::kernel_dyadic(s, tau, p, kernel::dyadic_limit(Lambda));
      worst = std::max(worst, std::abs(direct - dyadic.I_total) / std::abs(direct));
    }
  r.pass = worst <= 1e-3;
  r.detail = fmt("max |direct-dyadic|/|direct| = %.2e (<=1e-3) over 12 cells, Lambda=2^10", worst);
  return r;
}

Result kernel_bound(const Options& o) {
  Result r{7, "kernel bound", false, {}, 0.0};
  const auto p = phases::validated(phases::frac_schrodinger(2.0));
  const int s_last = o.quick ? 5 : 8, t_last = o.quick ? 4 : 7;
  std::vector<double> s_list, tau_list, lambdas;
  for (int e = 2; e <= s_last; ++e) s_list.push_back(std::ldexp(1.0, -e));
  for (int e = 1; e <= t_last; ++e) {
    tau_list.push_back(std::ldexp(1.0, -e));
    tau_list.push_back(-std::ldexp(1.0, -e));
  }
  if (o.quick)
    lambdas = {256.0};
  else
    lambdas = {256.0, 1024.0, 4096.0};
  const kernel::SweepSummary sw = kernel::bound_sweep(p, s_list, tau_list, lambdas, o.workers);

  // growth of max_tau s|I| from s to s/2, per Lambda
  const std::size_t nt = tau_list.size(), nl = lambdas.size();
  double growth = 0.0, shrink = INFINITY;
  for (std::size_t l = 0; l < nl; ++l) {
    std::vector<double> m(s_list.size(), 0.0);
    for (std::size_t i = 0; i < s_list.size(); ++i)
      for (std::size_t t = 0; t < nt; ++t) m[i] = std::max(m[i], sw.rows[(i * nt + t) * nl + l].s_abs_I);
    for (std::size_t i = 1; i < m.size(); ++i) {
      growth = std::max(growth, m[i] / m[i - 1]);
      shrink = std::min(shrink, m[i] / m[i - 1]);
    }
  }
  const double j3 = kernel::j3_limit(p.a, p.C1);
  r.pass = sw.failures == 0 && growth <= 1.1 && sw.lambda_spread <= 1e-6 && sw.max_j3 <= j3;
  r.detail = fmt("%zu cells, %d failed; max s|I|=%.4f; per-halving factor in [%.3f, %.3f] (growth "
                 "<=1.1); Lambda spread %.1e (<=1e-6); max |J3|=%d (<=%.0f)",
                 sw.rows.size(), sw.failures, sw.max_s_abs, shrink, growth, sw.lambda_spread, sw.max_j3, j3);
  return r;
}

Result maximal_experiment(const Options& o) {
  Result r{8, "maximal ratio", false, {}, 0.0};
  const auto p = phases::validated(phases::frac_schrodinger(2.0));
  const int k_last = o.quick ? 6 : 10;
  propagator::MaximalOptions mo;
  mo.workers = o.workers;
  std::vector<double> ks, half, zero;
  double change = 0.0;
  for (int k = 3; k <= k_last; ++k) {
    const auto fh = propagator::frequency_bump(k, p, 0.5, mo);
    const auto rep = propagator::maximal_ratio_report(fh, p, 0.5, mo);
    ks.push_back(k);
    half.push_back(rep.ratio);
    zero.push_back(rep.l1_norm / htransform::sobolev_norm(fh, 0.0));
    change = std::max(change, rep.last_change);
  }
  const double med = median(half), top = *std::max_element(half.begin(), half.end());
  const double rho = spearman(ks, zero);
  r.pass = top <= 2.0 * med && rho > 0.9 && change < mo.stabilization;
  std::string list;
  for (std::size_t i = 0; i < ks.size(); ++i) list += fmt("%s%.4f/%.3f", i ? " " : "", half[i], zero[i]);
  r.detail = fmt("k=3..%d beta=1/2 / beta=0 ratios: %s; max/median=%.3f (<=2), Spearman(beta=0)=%.3f "
                 "(>0.9), last refinement change %.1e (<1e-2)",
                 k_last, list.c_str(), top / med, rho, change);
  return r;
}

Result geodesic(const Options&) {
  Result r{9, "geodesic potential", false, {}, 0.0};
  const double v = kernel::geodesic_potential(1.0, 8), v2 = kernel::geodesic_potential(1.0, 16);
  const double half = kernel::geodesic_potential(0.5, 8);
  r.pass = std::isfinite(v) && std::fabs(v - v2) <= 1e-10 && v > 2.0 && v < std::sinh(2.0);
  r.detail = fmt("int_0^1 sinh(2s)/s ds = %.14f, doubled-node change %.1e (<=1e-10); r=1/2 gives %.14f",
                 v, std::fabs(v - v2), half);
  return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DegenerateInputError("Spearman needs paired samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> rk(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t q = i; q <= j; ++q) rk[idx[q]] = 0.5 * static_cast<double>(i + j);
      i = j + 1;
    }
    return rk;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

Result run_criterion(int id, const Options& o) {
  if (id < 1 || id > kCriteria) throw DomainError("no acceptance criterion " + std::to_string(id));
  const auto start = std::chrono::steady_clock::now();
  Result r;
  try {
    switch (id) {
      case 1: r = spherical_suite(o); break;
      case 2: r = series_order(o); break;
      case 3: r = bessel_asymptotics(o); break;
      case 4: r = transform_suite(o); break;
      case 5: r = propagator_suite(o); break;
      case 6: r = kernel_dual_path(o); break;
      case 7: r = kernel_bound(o); break;
      case 8: r = maximal_experiment(o); break;
      case 9: r = geodesic(o); break;
    }
  } catch (const std::exception& e) {
    r.id = id;
    r.title = "criterion " + std::to_string(id);
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<Result> run_all(const Options& options, const std::function<void(const Result&)>& on_result) {
  std::vector<Result> out;
  for (int id = 1; id <= kCriteria; ++id) {
    out.push_back(run_criterion(id, options));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format(const Result& r) {
  return fmt("%s %d %s: %s (%.1f s)", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
             r.detail.c_str(), r.seconds);
}

}  // namespace hyperdisp::acceptance
