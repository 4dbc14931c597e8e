#include "hyperdisp/phases.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/quadrature.hpp"

namespace hyperdisp::phases {
namespace {

constexpr double kTrendLimit = 0.1;

// psi = sqrt(q) for a quartic q(lambda) with derivatives q1, q2, q3.
struct SqrtQuartic {
  double c2, c0;  // q = lambda^4 + c2 lambda^2 + c0
  double q(double l) const { return l * l * l * l + c2 * l * l + c0; }
  double q1(double l) const { return 4.0 * l * l * l + 2.0 * c2 * l; }
  double q2(double l) const { return 12.0 * l * l + 2.0 * c2; }
  double q3(double l) const { return 24.0 * l; }
  double d1(double l) const { return q1(l) / (2.0 * std::sqrt(q(l))); }
  double d2(double l) const {
    const double p = std::sqrt(q(l)), p1 = d1(l);
    return (0.5 * q2(l) - p1 * p1) / p;
  }
  double d3(double l) const {
    const double p = std::sqrt(q(l));
    return (0.5 * q3(l) - 3.0 * d1(l) * d2(l)) / p;
  }
};

PhaseSpec from_quartic(std::string name, SqrtQuartic q, RealFn outer) {
  PhaseSpec p;
  p.name = std::move(name);
  p.a = 2.0;
  p.outer = std::move(outer);
  p.psi = [q](double l) { return std::sqrt(q.q(l)); };
  p.dpsi = [q](double l) { return q.d1(l); };
  p.d2psi = [q](double l) { return q.d2(l); };
  p.d3psi = [q](double l) { return q.d3(l); };
  return p;
}

double richardson(const RealFn& f, double x, double h, int order) {
  auto central = [&](double step) {
    switch (order) {
      case 1:
        return (f(x + step) - f(x - step)) / (2.0 * step);
      case 2:
        return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
      default:
        return (f(x + 2.0 * step) - 2.0 * f(x + step) + 2.0 * f(x - step) - f(x - 2.0 * step)) /
               (2.0 * step * step * step);
    }
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

}  // namespace

PhaseSpec frac_schrodinger(double a) {
  if (!(a > 1.0)) throw AdmissibilityError("fractional Schrodinger phase needs degree a > 1");
  PhaseSpec p;
  p.name = a == 2.0 ? "schrodinger" : "frac";
  p.family = Family::FracSchrodinger;
  p.a = a;
  p.outer = [a](double r) { return std::pow(r, a); };
  p.psi = [a](double l) { return std::pow(l * l + 1.0, 0.5 * a); };
  p.dpsi = [a](double l) { return a * l * std::pow(l * l + 1.0, 0.5 * a - 1.0); };
  p.d2psi = [a](double l) {
    const double q = l * l + 1.0;
    return a * std::pow(q, 0.5 * a - 2.0) * ((a - 1.0) * l * l + 1.0);
  };
  p.d3psi = [a](double l) {
    const double q = l * l + 1.0;
    return a * l * std::pow(q, 0.5 * a - 3.0) *
           ((a - 4.0) * ((a - 1.0) * l * l + 1.0) + 2.0 * (a - 1.0) * q);
  };
  return p;
}

PhaseSpec boussinesq() {
  // (lambda^2 + 1)(lambda^2 + 2)
  PhaseSpec p = from_quartic("boussinesq", {3.0, 2.0},
                             [](double r) { return r * std::sqrt(1.0 + r * r); });
  p.family = Family::Boussinesq;
  return p;
}

PhaseSpec beam() {
  // 1 + (lambda^2 + 1)^2
  PhaseSpec p = from_quartic("beam", {2.0, 2.0},
                             [](double r) { return std::sqrt(1.0 + r * r * r * r); });
  p.family = Family::Beam;
  return p;
}

PhaseSpec custom(std::string name, RealFn outer, double a) {
  if (!outer) throw AdmissibilityError("custom phase needs Psi");
  if (!(a > 1.0)) throw AdmissibilityError("custom phase needs degree a > 1");
  PhaseSpec p;
  p.name = std::move(name);
  p.family = Family::Custom;
  p.a = a;
  p.outer = outer;
  RealFn psi = [outer](double l) { return outer(std::sqrt(l * l + 1.0)); };
  p.psi = psi;
  p.dpsi = [psi](double l) { return richardson(psi, l, 1e-3 * std::max(1.0, std::fabs(l)), 1); };
  p.d2psi = [psi](double l) { return richardson(psi, l, 2e-3 * std::max(1.0, std::fabs(l)), 2); };
  p.d3psi = [psi](double l) { return richardson(psi, l, 1e-2 * std::max(1.0, std::fabs(l)), 3); };
  return p;
}

PhaseSpec make_phase(std::string_view name, double a) {
  if (name == "schrodinger") return frac_schrodinger(2.0);
  if (name == "frac" || name == "fractional") return frac_schrodinger(a);
  if (name == "boussinesq") return boussinesq();
  if (name == "beam") return beam();
  throw UsageError("unknown phase '" + std::string(name) + "'");
}

AdmissibilityReport validate_phase(const PhaseSpec& p, double lambda_max, int samples) {
  if (!(lambda_max > 1.0)) throw DomainError("lambda_max must exceed 1");
  if (samples < 4) throw DomainError("phase validation needs at least 4 samples");
  if (!p.psi || !p.dpsi || !p.d2psi || !p.d3psi) throw AdmissibilityError("phase is incomplete");

  AdmissibilityReport r;
  r.lambda_max = lambda_max;
  r.samples = samples;
  std::vector<double> logl, l1, l2, l3;
  r.r1_min = r.r2_min = std::numeric_limits<double>::infinity();
  const double a = p.a;
  for (int i = 0; i < samples; ++i) {
    const double l = std::pow(lambda_max, static_cast<double>(i + 1) / samples);
    const double v0 = p.psi(l);
    if (!std::isfinite(v0) || std::fabs(v0 - p.psi(-l)) > 1e-12 * std::max(1.0, std::fabs(v0)))
      throw AdmissibilityError("phase is not even and finite at lambda = " + std::to_string(l));
    const double q1 = std::fabs(p.dpsi(l)) / std::pow(l, a - 1.0);
    const double q2 = std::fabs(p.d2psi(l)) / std::pow(l, a - 2.0);
    const double q3 = std::fabs(p.d3psi(l)) * std::pow(l, 3.0 - a);
    if (!std::isfinite(q1) || !std::isfinite(q2) || !std::isfinite(q3))
      throw AdmissibilityError("derivative ratio not finite at lambda = " + std::to_string(l));
    if (q1 == 0.0 || q2 == 0.0)
      throw AdmissibilityError("derivative ratio vanishes at lambda = " + std::to_string(l));
    r.r1_min = std::min(r.r1_min, q1);
    r.r1_max = std::max(r.r1_max, q1);
    r.r2_min = std::min(r.r2_min, q2);
    r.r2_max = std::max(r.r2_max, q2);
    r.r3_max = std::max(r.r3_max, q3);
    if (i >= samples / 2) {
      logl.push_back(std::log(l));
      l1.push_back(std::log(q1));
      l2.push_back(std::log(q2));
      l3.push_back(std::log(std::max(q3, 1e-8)));  // below 1e-8 is difference noise
    }
  }
  r.trend1 = regression_slope(logl, l1);
  r.trend2 = regression_slope(logl, l2);
  r.trend3 = regression_slope(logl, l3);
  if (std::fabs(r.trend1) > kTrendLimit || std::fabs(r.trend2) > kTrendLimit || r.trend3 > kTrendLimit)
    throw AdmissibilityError("derivative ratios drift across decades for '" + p.name +
                             "' (slopes " + std::to_string(r.trend1) + ", " +
                             std::to_string(r.trend2) + ", " + std::to_string(r.trend3) +
                             "); check the declared degree");
  r.C1 = std::max({1.0, r.r1_max, 1.0 / r.r1_min});
  r.C2 = std::max({1.0, r.r2_max, 1.0 / r.r2_min});
  r.C3 = std::max(1.0, r.r3_max);
  return r;
}

PhaseSpec validated(PhaseSpec p, double lambda_max, int samples) {
  const AdmissibilityReport r = validate_phase(p, lambda_max, samples);
  p.C1 = r.C1;
  p.C2 = r.C2;
  p.C3 = r.C3;
  p.validated = true;
  return p;
}

}  // namespace hyperdisp::phases
