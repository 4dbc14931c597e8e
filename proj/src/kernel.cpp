#include "hyperdisp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hyperdisp/errors.hpp"
#include "hyperdisp/parallel.hpp"
#include "hyperdisp/quadrature.hpp"
#include "hyperdisp/specfun.hpp"
#include "hyperdisp/spherical.hpp"

namespace hyperdisp::kernel {
namespace {

constexpr std::size_t kCells = 4096;  // cumulative table of the bump integral
constexpr int kPanelOrder = 16;
constexpr double kTanhClamp = 40.0;

double bump(double u) { return u > 0.0 && u < 1.0 ? std::exp(-1.0 / (u * (1.0 - u))) : 0.0; }

double bump_derivative(double u) {
  if (!(u > 0.0 && u < 1.0)) return 0.0;
  const double q = u * (1.0 - u);
  return bump(u) * (1.0 - 2.0 * u) / (q * q);
}

double clamped_tanh(double x) { return x > kTanhClamp ? 1.0 : std::tanh(x); }

// Integral of the bump over [a, b] inside one table cell.
double cell_integral(double a, double b, const GaussRule& g) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) acc += g.weights[i] * bump(mid + half * g.nodes[i]);
  return acc * half;
}

void check_kernel_args(double s, double tau) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("kernel radius must lie in (0, 1)");
  if (!(std::fabs(tau) < 1.0)) throw DomainError("kernel time difference must satisfy |tau| < 1");
}

phases::PhaseSpec ensure_validated(const phases::PhaseSpec& p) {
  return p.validated ? p : phases::validated(p);
}

// Chebyshev interpolants of mu -> phi_mu(s) on uniform panels of [lo, hi].
class PhiPanels {
 public:
  PhiPanels(spherical::IntegralRep& rep, double lo, double hi, const KernelOptions& o) : lo_(lo) {
    const double s = rep.radius();
    const std::size_t count =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) * s / o.chebyshev_phase)));
    width_ = (hi - lo) / count;
    panels_.reserve(count);
    std::vector<double> v(o.chebyshev_nodes);
    for (std::size_t q = 0; q < count; ++q) {
      const double a = lo + width_ * q, b = q + 1 == count ? hi : a + width_;
      const auto x = ChebyshevPanel::points(a, b, o.chebyshev_nodes);
      for (int i = 0; i < o.chebyshev_nodes; ++i) v[i] = rep(x[i]);
      panels_.emplace_back(a, b, v);
    }
  }
  double operator()(double mu) const {
    const double u = (mu - lo_) / width_;
    const std::size_t q = u <= 0.0 ? 0 : std::min(panels_.size() - 1, static_cast<std::size_t>(u));
    return panels_[q](mu);
  }
  std::size_t size() const { return panels_.size(); }

 private:
  double lo_, width_ = 1.0;
  std::vector<ChebyshevPanel> panels_;
};

// Leading theta terms 2 Re(e^{ix}(theta1 x^{-1/2} + theta2 x^{-3/2})).
class ThetaPhi {
 public:
  explicit ThetaPhi(double s) : s_(s), theta_(theta_coefficients(s)) {}
  double operator()(double mu) const {
    const double x = mu * s_;
    const double h = 1.0 / std::sqrt(x);
    const std::complex<double> amp = theta_[0] * h + theta_[1] * (h * h * h);
    return 2.0 * std::real(std::polar(1.0, x) * amp);
  }

 private:
  double s_;
  std::array<std::complex<double>, 4> theta_;
};

// Panel breakpoints on [lo, hi] with at least `npp` nodes per period of rate(lambda).
template <class Rate>
std::vector<double> panel_breaks(double lo, double hi, double cap, double npp, Rate&& rate,
                                 double max_nodes) {
  std::vector<double> b{lo};
  const double per_panel = kPanelOrder * 2.0 * std::numbers::pi / npp;
  double a = lo;
  while (a < hi) {
    double w = std::min(cap, per_panel / std::max(rate(a), 1e-300));
    for (int it = 0; it < 2; ++it) {
      const double e = std::min(a + w, hi);
      const double r = std::max({rate(a), rate(0.5 * (a + e)), rate(e)});
      w = std::min(cap, per_panel / std::max(r, 1e-300));
    }
    a = hi - a <= w * (1.0 + 1e-12) ? hi : a + w;
    b.push_back(a);
    if (static_cast<double>(b.size() - 1) * kPanelOrder > max_nodes)
      throw ResolutionError("kernel quadrature node budget exceeded",
                            static_cast<double>(b.size() - 1),
                            static_cast<double>(b.size() - 1) * (hi - lo) / (a - lo));
  }
  return b;
}

template <class F>
std::complex<double> integrate(const std::vector<double>& breaks, F&& f) {
  const GaussRule& g = gauss_legendre(kPanelOrder);
  CompensatedSum<double> re, im;
  for (std::size_t q = 0; q + 1 < breaks.size(); ++q) {
    const double half = 0.5 * (breaks[q + 1] - breaks[q]), mid = 0.5 * (breaks[q + 1] + breaks[q]);
    std::complex<double> acc = 0.0;
    for (int i = 0; i < kPanelOrder; ++i) acc += g.weights[i] * f(mid + half * g.nodes[i]);
    re += half * acc.real();
    im += half * acc.imag();
  }
  return {re.value(), im.value()};
}

KernelReport dyadic_sum(double s, double tau, const phases::PhaseSpec& p_in, int j_max,
                        const KernelOptions& o) {
  check_kernel_args(s, tau);
  if (j_max < kLowestIndex) throw DomainError("dyadic limit below the lowest summed index");
  const phases::PhaseSpec p = ensure_validated(p_in);
  const DyadicWindow& win = DyadicWindow::instance();

  KernelReport rep;
  rep.s = s;
  rep.tau = tau;
  rep.a = p.a;
  rep.C1 = p.C1;
  rep.j_max = j_max;
  rep.j3_limit = j3_limit(p.a, p.C1);

  spherical::IntegralRep oracle(s);
  const ThetaPhi theta(s);
  double budget = o.max_nodes;
  CompensatedSum<double> tot_re, tot_im;
  for (int j = kLowestIndex; j <= j_max; ++j) {
    const double scale = std::ldexp(1.0, j);
    KernelEntry e;
    e.j = j;
    e.cls = classify(j, s, tau, p.a, p.C1);
    e.envelope = class_envelope(e.cls, j, s, tau, p.a);
    e.theta_split = scale * s >= kThetaCrossover;

    auto rate = [&](double l) { return scale * (std::fabs(tau) * std::fabs(p.dpsi(scale * l)) + s); };
    const auto breaks = panel_breaks(1.0, 4.0, 0.125, o.nodes_per_period, rate, budget);
    e.nodes = (breaks.size() - 1) * kPanelOrder;
    budget -= static_cast<double>(e.nodes);

    auto body = [&](auto&& phi_of) {
      return integrate(breaks, [&](double l) {
        const double mu = scale * l;
        const double w = win.eta(l) * phi_of(mu) * clamped_tanh(0.5 * std::numbers::pi * mu);
        return w * std::polar(1.0, tau * p.psi(mu));
      });
    };
    std::complex<double> I;
    if (e.theta_split) {
      I = body(theta);
    } else {
      const PhiPanels panels(oracle, scale, 4.0 * scale, o);
      I = body(panels);
    }
    e.value = scale * I;
    const int c = static_cast<int>(e.cls);
    rep.class_totals[c] += e.value;
    rep.class_counts[c] += 1;
    tot_re += e.value.real();
    tot_im += e.value.imag();
    rep.nodes += e.nodes;
    if (e.envelope > 0.0 && std::isfinite(e.envelope))
      rep.max_class_violation = std::max(rep.max_class_violation, std::abs(e.value) / e.envelope);
    rep.entries.push_back(e);
  }
  rep.I_total = {tot_re.value(), tot_im.value()};
  rep.bound_product = s * std::abs(rep.I_total);
  const double last = std::abs(rep.entries.back().value), total = std::abs(rep.I_total);
  rep.tail = total > 0.0 ? last / total : (last > 0.0 ? INFINITY : 0.0);
  return rep;
}

}  // namespace

const DyadicWindow& DyadicWindow::instance() {
  static const DyadicWindow w;
  return w;
}

DyadicWindow::DyadicWindow() {
  const GaussRule& g = gauss_legendre(8);
  cumulative_.resize(kCells + 1);
  cumulative_[0] = 0.0;
  long double acc = 0.0L;
  for (std::size_t i = 0; i < kCells; ++i) {
    acc += cell_integral(static_cast<double>(i) / kCells, static_cast<double>(i + 1) / kCells, g);
    cumulative_[i + 1] = static_cast<double>(acc);
  }
  norm_ = cumulative_[kCells];
}

double DyadicWindow::step(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const std::size_t i = std::min(kCells - 1, static_cast<std::size_t>(u * kCells));
  const double a = static_cast<double>(i) / kCells;
  return (cumulative_[i] + cell_integral(a, u, gauss_legendre(4))) / norm_;
}

double DyadicWindow::chi(double x) const {
  const double ax = std::fabs(x);
  if (ax <= 1.0) return 1.0;
  if (ax >= 2.0) return 0.0;
  return 1.0 - step(ax - 1.0);
}

double DyadicWindow::eta(double x) const { return chi(0.5 * x) - chi(x); }

double DyadicWindow::eta_derivative(double x, int order) const {
  const double sg = x < 0.0 ? -1.0 : 1.0;
  auto chi1 = [&](double y) { return -sg * bump(std::fabs(y) - 1.0) / norm_; };
  auto chi2 = [&](double y) { return -bump_derivative(std::fabs(y) - 1.0) / norm_; };
  switch (order) {
    case 0:
      return eta(x);
    case 1:
      return 0.5 * chi1(0.5 * x) - chi1(x);
    case 2:
      return 0.25 * chi2(0.5 * x) - chi2(x);
    default:
      throw UnsupportedError("eta derivatives available up to order 2");
  }
}

std::array<double, 3> DyadicWindow::derivative_bounds() const {
  std::array<double, 3> m{};
  constexpr int n = 30000;
  for (int i = 0; i <= n; ++i) {
    const double x = 1.0 + 3.0 * i / n;
    for (int p = 0; p < 3; ++p) m[p] = std::max(m[p], std::fabs(eta_derivative(x, p)));
  }
  return m;
}

const char* class_name(TermClass c) {
  switch (c) {
    case TermClass::Low:
      return "Low";
    case TermClass::J1:
      return "J1";
    case TermClass::J2:
      return "J2";
    case TermClass::J3:
      return "J3";
  }
  return "?";
}

TermClass classify(int j, double s, double tau, double a, double C1) {
  if (j <= static_cast<int>(std::ceil(-std::log2(s)))) return TermClass::Low;
  const double x = std::ldexp(1.0, j) * s;
  const double at = std::fabs(tau);
  if (x <= std::exp2(a * j - 1.0) / C1 * at) return TermClass::J1;
  if (x >= std::exp2(a * j + 1.0) * std::pow(4.0, a - 1.0) * C1 * at) return TermClass::J2;
  return TermClass::J3;
}

double class_envelope(TermClass c, int j, double s, double tau, double a) {
  const double scale = std::ldexp(1.0, j), x = scale * s;
  const double osc = std::exp2(a * j) * std::fabs(tau);
  switch (c) {
    case TermClass::Low:
      return 3.0 * scale;
    case TermClass::J1:
      return scale * (std::pow(x, -0.5) / (osc * osc) + std::pow(x, -2.5));
    case TermClass::J2:
      return 2.0 * scale * std::pow(x, -2.5);
    case TermClass::J3:
      return scale * (std::pow(x, -0.5) / std::sqrt(osc) + std::pow(x, -2.5));
  }
  return 0.0;
}

double j3_limit(double a, double C1) { return 2.0 / (a - 1.0) * std::log2(2.0 * C1) + 2.0; }

int dyadic_limit(double Lambda) {
  int e = 0;
  const double m = std::frexp(Lambda, &e);
  if (!(Lambda >= 2.0) || m != 0.5) throw DomainError("Lambda must be a power of two >= 2");
  return e - 2;  // Lambda = 2^{e-1} = 2^{J+1}
}

std::complex<double> kernel_direct(double s, double tau, const phases::PhaseSpec& p,
                                   double Lambda, const KernelOptions& o) {
  check_kernel_args(s, tau);
  dyadic_limit(Lambda);
  if (!p.psi || !p.dpsi) throw AdmissibilityError("phase is incomplete");
  const DyadicWindow& win = DyadicWindow::instance();
  const double hi = 2.0 * Lambda;
  auto rate = [&](double l) { return std::fabs(tau) * std::fabs(p.dpsi(l)) + s; };
  auto cap = std::min(0.25, Lambda / 16.0);
  // wider panels are allowed once tanh has saturated
  std::vector<double> breaks = panel_breaks(0.0, std::min(4.0, hi), cap, o.nodes_per_period, rate,
                                            o.max_nodes);
  if (hi > 4.0) {
    const auto rest = panel_breaks(4.0, hi, Lambda / 16.0, o.nodes_per_period, rate,
                                   o.max_nodes - (breaks.size() - 1) * kPanelOrder);
    breaks.insert(breaks.end(), rest.begin() + 1, rest.end());
  }
  spherical::IntegralRep oracle(s);
  const PhiPanels phi(oracle, 0.0, hi, o);
  return integrate(breaks, [&](double l) {
    const double w = win.chi(l / Lambda) * phi(l) * clamped_tanh(0.5 * std::numbers::pi * l);
    return w * std::polar(1.0, tau * p.psi(l));
  });
}

KernelReport kernel_dyadic_partial(double s, double tau, const phases::PhaseSpec& p, int j_max,
                                   const KernelOptions& options) {
  return dyadic_sum(s, tau, p, j_max, options);
}

KernelReport kernel_dyadic(double s, double tau, const phases::PhaseSpec& p, int j_max,
                           const KernelOptions& options) {
  KernelReport rep = dyadic_sum(s, tau, p, j_max, options);
  if (rep.tail > options.tolerance)
    throw TruncationError("dyadic sum not converged at j = " + std::to_string(j_max), rep.tail);
  return rep;
}

std::array<std::complex<double>, 4> theta_coefficients(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("theta coefficients need 0 < s < 1");
  const auto& z = specfun::asymptotic_coeffs().z;
  const double g = spherical::leading_amplitude(s);
  const double a1s2 = spherical::default_a1()(s) * s * s;
  return {g * z[0], g * (z[1] + a1s2 * z[4]), g * z[2], g * (z[3] + a1s2 * z[5])};
}

double ThetaSplit::leading() const {
  const double h = 1.0 / std::sqrt(x);
  const auto e = std::polar(1.0, x);
  return std::real(e * (theta[0] * h + theta[1] * (h * h * h)) +
                   std::conj(e) * (theta[2] * h + theta[3] * (h * h * h)));
}

ThetaSplit bessel_term_split(int j, double lambda, double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("theta split needs 0 < s < 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("theta split needs lambda > 0");
  const double mu = std::ldexp(lambda, j);
  ThetaSplit t;
  t.x = mu * s;
  if (!(t.x > 1.0)) throw RangeError("theta split needs 2^j lambda s > 1");
  t.theta = theta_coefficients(s);
  t.remainder = spherical::phi(mu, s) - t.leading();
  return t;
}

SweepSummary bound_sweep(const phases::PhaseSpec& p_in, std::span<const double> s_list,
                         std::span<const double> tau_list, std::span<const double> Lambda_list,
                         int workers, const KernelOptions& options) {
  const phases::PhaseSpec p = ensure_validated(p_in);
  const std::size_t ns = s_list.size(), nt = tau_list.size(), nl = Lambda_list.size();
  SweepSummary out;
  out.rows.resize(ns * nt * nl);
  parallel_for(out.rows.size(), workers, [&](std::size_t idx) {
    SweepRow& r = out.rows[idx];
    r.s = s_list[idx / (nt * nl)];
    r.tau = tau_list[(idx / nl) % nt];
    r.Lambda = Lambda_list[idx % nl];
    try {
      const KernelReport k = kernel_dyadic(r.s, r.tau, p, dyadic_limit(r.Lambda), options);
      r.I = k.I_total;
      r.abs_I = std::abs(k.I_total);
      r.s_abs_I = k.bound_product;
      r.counts = k.class_counts;
      r.max_class_violation = k.max_class_violation;
    } catch (const Error& e) {
      r.failed = true;
      r.error = e.what();
    }
  });

  out.s_values.assign(s_list.begin(), s_list.end());
  out.max_by_s.assign(ns, 0.0);
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t t = 0; t < nt; ++t) {
      double lo = INFINITY, hi = 0.0;
      for (std::size_t l = 0; l < nl; ++l) {
        const SweepRow& r = out.rows[(i * nt + t) * nl + l];
        if (r.failed) {
          ++out.failures;
          continue;
        }
        out.max_by_s[i] = std::max(out.max_by_s[i], r.s_abs_I);
        out.max_j3 = std::max(out.max_j3, r.counts[static_cast<int>(TermClass::J3)]);
        lo = std::min(lo, r.abs_I);
        hi = std::max(hi, r.abs_I);
      }
      if (hi > 0.0) out.lambda_spread = std::max(out.lambda_spread, (hi - lo) / hi);
    }
    out.max_s_abs = std::max(out.max_s_abs, out.max_by_s[i]);
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ns; ++i)
    if (out.max_by_s[i] > 0.0) {
      lx.push_back(std::log(out.s_values[i]));
      ly.push_back(std::log(out.max_by_s[i]));
    }
  if (lx.size() >= 2) out.trend = regression_slope(lx, ly);
  return out;
}

double geodesic_potential(double r, int panels) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("potential radius must be finite and >= 0");
  if (panels < 1) throw DomainError("potential quadrature needs at least one panel");
  if (r == 0.0) return 0.0;
  std::vector<double> breaks(panels + 1);
  for (int q = 0; q <= panels; ++q) breaks[q] = r * q / panels;
  const NodeSet ns = composite_gauss(breaks, kPanelOrder);
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < ns.nodes.size(); ++i)
    acc += ns.weights[i] * spherical::density(ns.nodes[i]) / ns.nodes[i];
  return acc.value();
}

}  // namespace hyperdisp::kernel
