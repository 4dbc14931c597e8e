#include "hyperdisp/spherical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/parallel.hpp"
#include "hyperdisp/specfun.hpp"

namespace hyperdisp::spherical {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr std::size_t kMaxLevels = 19;

void check_radius(double s) {
  if (!std::isfinite(s) || s < 0.0) throw DomainError("radius must be finite and >= 0");
}

void check_lambda(double lambda) {
  if (!std::isfinite(lambda)) throw DomainError("spectral parameter must be finite");
}

// u'' + 2 coth(2s) u' + (lambda^2 + 1) u = 0
struct RadialOde {
  double k2;
  void operator()(const State& x, State& dx, double s) const {
    dx[0] = x[1];
    dx[1] = -2.0 / std::tanh(2.0 * s) * x[1] - k2 * x[0];
  }
};

double taylor_value(double k2, double s) {
  const double s2 = s * s;
  return 1.0 - 0.25 * k2 * s2 + k2 * (k2 + 8.0 / 3.0) * s2 * s2 / 64.0;
}

double taylor_slope(double k2, double s) {
  return -0.5 * k2 * s + k2 * (k2 + 8.0 / 3.0) * s * s * s / 16.0;
}

}  // namespace

double density(double s) { return std::sinh(2.0 * s); }

double leading_amplitude(double s) {
  check_radius(s);
  const double x = 2.0 * s;
  if (x < 1e-4) return std::sqrt(1.0 - x * x / 6.0);
  return std::sqrt(x / std::sinh(x));
}

IntegralRep::IntegralRep(double s) : s_(s) {
  check_radius(s);
  endpoint_phase_ = s;
  endpoint_weight_ = 1.0;
}

const IntegralRep::Level& IntegralRep::level(std::size_t l) {
  while (levels_.size() <= l) {
    const std::size_t idx = levels_.size();
    const double pi = std::numbers::pi;
    std::vector<double> w;
    if (idx == 0) {
      for (std::size_t k = 1; k < base_; ++k) w.push_back(pi * k / base_);
    } else {
      const std::size_t n = base_ << idx;
      for (std::size_t k = 0; k < n / 2; ++k) w.push_back(pi * (2 * k + 1) / n);
    }
    Level lv;
    lv.half_phase.resize(w.size());
    lv.weight.resize(w.size());
    const double em = std::exp(-s_), sh = std::sinh(s_), sh2 = sh * sh;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double sn = std::sin(0.5 * w[k]);
      const double minus = em + 2.0 * sh * sn * sn;
      const double diff = 2.0 * sh * std::cos(w[k]);
      const double sw = std::sin(w[k]);
      lv.half_phase[k] = 0.5 * std::log1p(diff / minus);
      lv.weight[k] = 1.0 / std::sqrt(1.0 + sh2 * sw * sw);
    }
    levels_.push_back(std::move(lv));
  }
  return levels_[l];
}

template <class F>
double IntegralRep::evaluate(double rate, double tolerance, F&& kernel) {
  if (s_ == 0.0) return 1.0;
  const double needed = rate + 2.0 * std::sinh(s_) + 16.0;
  std::size_t l0 = 0;
  while (static_cast<double>(base_ << l0) < needed && l0 + 1 < kMaxLevels) ++l0;

  double sum = 0.5 * endpoint_weight_ * (kernel(endpoint_phase_) + kernel(-endpoint_phase_));
  auto add_level = [&](std::size_t l) {
    const Level& lv = level(l);
    double acc = 0.0;
    for (std::size_t k = 0; k < lv.weight.size(); ++k) acc += lv.weight[k] * kernel(lv.half_phase[k]);
    sum += acc;
  };
  for (std::size_t l = 0; l <= l0; ++l) add_level(l);
  double prev = sum / static_cast<double>(base_ << l0);
  double diff = 0.0;
  for (std::size_t l = l0 + 1; l < kMaxLevels; ++l) {
    add_level(l);
    const double cur = sum / static_cast<double>(base_ << l);
    diff = std::fabs(cur - prev);
    if (diff <= tolerance) return cur;
    prev = cur;
  }
  throw AccuracyError("integral representation did not converge", diff);
}

double IntegralRep::operator()(double lambda, double tolerance) {
  check_lambda(lambda);
  const double lam = std::fabs(lambda);
  const double sh = std::sinh(s_);
  const double slope = sh >= 1.0 ? std::cosh(s_) : 2.0 * std::tanh(s_);
  return evaluate(0.5 * lam * slope, tolerance, [lam](double hp) { return std::cos(lam * hp); });
}

double IntegralRep::cosh_branch(double mu, double tolerance) {
  check_lambda(mu);
  const double m = std::fabs(mu);
  const double slope = std::sinh(s_) >= 1.0 ? std::cosh(s_) : 2.0 * std::tanh(s_);
  const double scale = std::cosh(m * s_);
  return scale * evaluate(0.5 * m * slope, tolerance / scale,
                          [m, scale](double hp) { return std::cosh(m * hp) / scale; });
}

double ode_seed_radius(double lambda, double seed_limit) {
  if (!(seed_limit > 0.0)) throw DomainError("seed radius must be positive");
  return std::min(seed_limit, 1e-2 / std::sqrt(lambda * lambda + 1.0));
}

std::vector<double> phi_ode_profile(double lambda, std::span<const double> radii, double rtol,
                                    double seed_limit) {
  check_lambda(lambda);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    check_radius(radii[i]);
    if (i > 0 && radii[i] < radii[i - 1]) throw DomainError("ODE radii must be ascending");
  }
  const double k2 = lambda * lambda + 1.0;
  const double s0 = ode_seed_radius(lambda, seed_limit);
  std::vector<double> out(radii.size());
  std::vector<double> times{s0};
  std::vector<std::size_t> slot;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] <= s0) {
      out[i] = taylor_value(k2, radii[i]);
    } else if (radii[i] == times.back()) {
      slot.push_back(i);  // duplicate radius, filled from the previous slot below
    } else {
      times.push_back(radii[i]);
      slot.push_back(i);
    }
  }
  if (times.size() == 1) return out;

  State x{taylor_value(k2, s0), taylor_slope(k2, s0)};
  std::vector<double> sampled;
  sampled.reserve(times.size());
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(1e-13, rtol);
  const double dt = std::min(s0, 0.05 / std::sqrt(k2));
  try {
    odeint::integrate_times(stepper, RadialOde{k2}, x, times.begin(), times.end(), dt,
                            [&](const State& st, double) { sampled.push_back(st[0]); },
                            odeint::max_step_checker(10000000));
  } catch (const std::exception& e) {
    throw AccuracyError(std::string("radial ODE failed: ") + e.what(), rtol);
  }
  // sampled[0] is the seed; radii map onto sampled[1..]
  std::size_t t = 0;
  for (std::size_t j = 0; j < slot.size(); ++j) {
    const std::size_t i = slot[j];
    if (j == 0 || radii[i] != radii[slot[j - 1]]) ++t;
    out[i] = sampled[t];
  }
  return out;
}

double phi(double lambda, double s, const SphericalEval& eval) {
  check_lambda(lambda);
  check_radius(s);
  if (!(eval.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (s == 0.0) return 1.0;
  switch (eval.method) {
    case Method::IntegralRep: {
      IntegralRep rep(s);
      return rep(lambda, eval.tolerance);
    }
    case Method::JacobiODE: {
      const double r[1] = {s};
      return phi_ode_profile(lambda, r, std::min(1e-10, eval.tolerance), eval.seed_radius)[0];
    }
    case Method::BesselSeries: {
      const SeriesValue v = phi_bessel_series(lambda, s, eval.series_terms);
      if (v.error_bound > eval.tolerance)
        throw AccuracyError("Bessel series bound exceeds tolerance", v.error_bound);
      return v.value;
    }
  }
  throw UnsupportedError("unknown evaluation method");
}

double phi_imaginary(double mu, double s, double tolerance) {
  check_radius(s);
  IntegralRep rep(s);
  return rep.cosh_branch(mu, tolerance);
}

double A1Table::operator()(double radius) const {
  if (s.empty()) throw CalibrationError("a1 table is empty");
  if (s.size() == 1 || radius <= s.front()) return a1.front();
  if (radius >= s.back()) return a1.back();
  const auto it = std::upper_bound(s.begin(), s.end(), radius);
  const std::size_t i = static_cast<std::size_t>(it - s.begin()) - 1;
  const double h = s[i + 1] - s[i];
  const double a = (s[i + 1] - radius) / h, b = (radius - s[i]) / h;
  return a * a1[i] + b * a1[i + 1] +
         ((a * a * a - a) * second[i] + (b * b * b - b) * second[i + 1]) * h * h / 6.0;
}

namespace {

// Leading Bessel term with a1 = 1 removed: c0 (s/D)^{1/2} script_j(l, |lambda| s) s^{2l}.
double basis_term(int l, double lambda, double s, double normalization) {
  if (s == 0.0) return l == 0 ? 1.0 : 0.0;
  const double pref = normalization * leading_amplitude(s) / std::numbers::sqrt2;
  return pref * specfun::script_j(l, std::fabs(lambda) * s) * std::pow(s, 2 * l);
}

std::vector<double> natural_spline(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> y2(n, 0.0), u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
    const double p = sig * y2[i - 1] + 2.0;
    y2[i] = (sig - 1.0) / p;
    u[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    u[i] = (6.0 * u[i] / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
  }
  if (n >= 2) y2[n - 1] = 0.0;
  for (std::size_t k = n - 1; k-- > 0;) y2[k] = y2[k] * y2[k + 1] + u[k];
  return y2;
}

}  // namespace

A1Table calibrate_a1(std::span<const double> s_grid, std::span<const double> lambda_grid,
                     const SphericalEval& oracle) {
  if (s_grid.empty() || lambda_grid.size() < 2)
    throw CalibrationError("a1 calibration needs radii and at least two lambdas");
  A1Table table;
  for (double s : s_grid) {
    if (!(s > 0.0) || s > kSeriesRadius) throw CalibrationError("a1 radii must lie in (0, R0]");
    double num = 0.0, den = 0.0, r0 = 0.0;
    std::vector<double> resid, basis;
    std::vector<double> weight;
    for (double lam : lambda_grid) {
      const double exact = phi(lam, s, oracle);
      const double r = exact - basis_term(0, lam, s, kSeriesNormalization);
      const double b = basis_term(1, lam, s, kSeriesNormalization);
      // The a1 term decays like x^{-3/2}; weighting by (1 + x)^5 lets large x,
      // where the next term is negligible, carry the fit.
      const double w = std::pow(1.0 + std::fabs(lam) * s, 5.0);
      num += w * r * b;
      den += w * b * b;
      r0 += w * r * r;
      resid.push_back(r);
      basis.push_back(b);
      weight.push_back(w);
    }
    if (!(den > 0.0)) throw CalibrationError("a1 basis vanishes on the lambda grid");
    const double a = num / den;
    double r1 = 0.0;
    for (std::size_t k = 0; k < resid.size(); ++k) {
      const double e = resid[k] - a * basis[k];
      r1 += weight[k] * e * e;
    }
    if (r1 >= r0 && r0 > 0.0)
      throw CalibrationError("two-term fit does not improve on the leading term at s = " +
                             std::to_string(s));
    table.s.push_back(s);
    table.a1.push_back(a);
  }
  std::vector<std::size_t> order(table.s.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return table.s[i] < table.s[j]; });
  A1Table sorted;
  for (auto i : order) {
    sorted.s.push_back(table.s[i]);
    sorted.a1.push_back(table.a1[i]);
  }
  sorted.second = natural_spline(sorted.s, sorted.a1);
  return sorted;
}

const A1Table& default_a1() {
  static const A1Table table = [] {
    std::vector<double> s, lam;
    for (int i = 1; i <= 50; ++i) s.push_back(0.02 * i);
    for (double l = 0.25; l < 2000.0; l *= 1.15) lam.push_back(l);
    return calibrate_a1(s, lam);
  }();
  return table;
}

const SeriesEnvelope& default_envelope() {
  // Measured maxima 0.1374 and 0.1007 over s in (0, 1], lambda <= 3000.
  static const SeriesEnvelope env{0.15, 0.12};
  return env;
}

double envelope_shape(double lambda, double s, int M) {
  const double x = std::fabs(lambda) * s;
  if (M == 0) return s * s * (x <= 1.0 ? 1.0 : std::pow(x, -1.5));
  if (M == 1) return std::pow(s, 4) * (x <= 1.0 ? 1.0 : std::pow(x, -2.5));
  throw UnsupportedError("series envelope defined for M = 0, 1");
}

std::vector<ExpansionTerm> expansion_terms(double lambda, double s, int terms, const A1Table& a1,
                                           double normalization) {
  check_lambda(lambda);
  check_radius(s);
  if (terms < 1 || terms > 2) throw UnsupportedError("expansion available for one or two terms");
  std::vector<ExpansionTerm> out;
  out.push_back({0, 1.0, basis_term(0, lambda, s, normalization)});
  if (terms == 2) {
    const double a = a1(s);
    out.push_back({1, a, a * basis_term(1, lambda, s, normalization)});
  }
  return out;
}

SeriesValue phi_bessel_series(double lambda, double s, int M, const A1Table& a1,
                              const SeriesEnvelope& envelope, double normalization) {
  check_lambda(lambda);
  check_radius(s);
  if (M != 0 && M != 1) throw UnsupportedError("Bessel series available for M = 0, 1");
  if (s > kSeriesRadius) throw RangeError("Bessel series used beyond its radius of validity");
  SeriesValue v;
  for (const auto& t : expansion_terms(lambda, s, M + 1, a1, normalization)) v.value += t.value;
  v.error_bound = (M == 0 ? envelope.c0 : envelope.c1) * envelope_shape(lambda, s, M);
  return v;
}

SeriesValue phi_bessel_series(double lambda, double s, int M) {
  return phi_bessel_series(lambda, s, M, default_a1(), default_envelope());
}

double calibrate_series_envelope(int M, std::span<const double> s_grid,
                                 std::span<const double> lambda_grid, const A1Table& a1) {
  double worst = 0.0;
  for (double s : s_grid) {
    if (s == 0.0) continue;
    IntegralRep rep(s);
    for (double lam : lambda_grid) {
      const double exact = rep(lam, 1e-14);
      const SeriesValue v = phi_bessel_series(lam, s, M, a1, SeriesEnvelope{});
      worst = std::max(worst, std::fabs(exact - v.value) / envelope_shape(lam, s, M));
    }
  }
  return worst;
}

SphericalTable build_table(std::span<const double> radii, std::span<const double> lambdas,
                           int workers, double ode_threshold) {
  SphericalTable t;
  t.radii.assign(radii.begin(), radii.end());
  t.lambdas.assign(lambdas.begin(), lambdas.end());
  t.values.assign(radii.size() * lambdas.size(), 0.0);
  if (radii.empty() || lambdas.empty()) return t;
  for (double s : radii) check_radius(s);
  const double s_max = *std::max_element(radii.begin(), radii.end());

  std::vector<std::size_t> by_rep, by_ode;
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    (std::fabs(lambdas[k]) * s_max > ode_threshold ? by_ode : by_rep).push_back(k);

  const std::size_t nl = lambdas.size();
  if (!by_rep.empty()) {
    parallel_for(radii.size(), workers, [&](std::size_t i) {
      IntegralRep rep(radii[i]);
      for (auto k : by_rep) t.values[i * nl + k] = rep(lambdas[k], 1e-13);
    });
  }
  if (!by_ode.empty()) {
    std::vector<std::size_t> order(radii.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return radii[a] < radii[b]; });
    std::vector<double> sorted(radii.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = radii[order[i]];
    parallel_for(by_ode.size(), workers, [&](std::size_t c) {
      const std::size_t k = by_ode[c];
      const auto col = phi_ode_profile(lambdas[k], sorted);
      for (std::size_t i = 0; i < order.size(); ++i) t.values[order[i] * nl + k] = col[i];
    });
  }
  return t;
}

}  // namespace hyperdisp::spherical
