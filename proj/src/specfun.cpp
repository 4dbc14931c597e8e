#include "hyperdisp/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hyperdisp/errors.hpp"

namespace hyperdisp::specfun {
namespace {

constexpr double kSeriesMax = 12.0;
constexpr double kMillerMax = 25.0;

int check_order(double order) {
  if (!std::isfinite(order) || order < 0.0) throw DomainError("Bessel order must be >= 0");
  if (order != 0.0 && order != 1.0)
    throw UnsupportedError("Bessel order " + std::to_string(order) + " not supported");
  return static_cast<int>(order);
}

void check_argument(double t) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("Bessel argument must be finite and >= 0");
}

double series(int order, double t) {
  const long double h = 0.5L * t;
  const long double h2 = h * h;
  long double term = order == 0 ? 1.0L : h;
  long double sum = term;
  for (int k = 1; k < 80; ++k) {
    term *= -h2 / (static_cast<long double>(k) * (k + order));
    sum += term;
    if (k >= 30 && std::fabs(term) < 1e-24L) break;
  }
  return static_cast<double>(sum);
}

// Backward recurrence normalised by J_0 + 2 sum J_{2k} = 1.
void miller(double t, double& j0, double& j1) {
  int m = 2 * static_cast<int>(std::ceil((t + 40.0) / 2.0));
  double next = 0.0, cur = 1e-30, sum = 0.0, keep1 = 0.0;
  for (int k = m; k >= 1; --k) {
    const double prev = 2.0 * k / t * cur - next;
    next = cur;
    cur = prev;
    const int idx = k - 1;
    if (idx == 1) keep1 = cur;
    if (idx > 0 && idx % 2 == 0) sum += 2.0 * cur;
    if (std::fabs(cur) > 1e200) {
      cur *= 1e-200;
      next *= 1e-200;
      sum *= 1e-200;
      keep1 *= 1e-200;
    }
  }
  sum += cur;
  j0 = cur / sum;
  j1 = keep1 / sum;
}

// cos and sin of t - (order/2 + 1/4) pi without reducing a shifted argument.
void hankel_angle(int order, double t, double& c, double& s) {
  const double ct = std::cos(t), st = std::sin(t);
  const double r = std::numbers::sqrt2 / 2.0;
  if (order == 0) {
    c = (ct + st) * r;
    s = (st - ct) * r;
  } else {
    c = (st - ct) * r;
    s = -(st + ct) * r;
  }
}

double hankel(int order, double t) {
  const double mu = 4.0 * order * order;
  double p = 1.0, q = 0.0, a = 1.0, last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = a * (mu - odd * odd) / (8.0 * k * t);
    if (std::fabs(next) > last) break;
    a = next;
    last = std::fabs(a);
    const int r = k / 2;
    const double sign = (r % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      p += sign * a;
    else
      q += sign * a;
    if (last < 1e-18) break;
  }
  double c, s;
  hankel_angle(order, t, c, s);
  return std::sqrt(2.0 / (std::numbers::pi * t)) * (p * c - q * s);
}

// DLMF a_k(0) = prod_{m=1..k} (-(2m-1)^2) / (k! 8^k)
double hankel_coefficient(int k) {
  double a = 1.0;
  for (int m = 1; m <= k; ++m) {
    const double odd = 2.0 * m - 1.0;
    a *= -odd * odd / (8.0 * m);
  }
  return a;
}

}  // namespace

double bessel_j(double nu, double t) {
  const int order = check_order(nu);
  check_argument(t);
  if (t <= kSeriesMax) return series(order, t);
  if (t < kMillerMax) {
    double j0, j1;
    miller(t, j0, j1);
    return order == 0 ? j0 : j1;
  }
  return hankel(order, t);
}

double script_j(double nu, double z) {
  const int order = check_order(nu);
  check_argument(z);
  const double pi = std::numbers::pi;
  if (order == 0) return 0.5 * pi * bessel_j(0, z);
  if (z == 0.0) return 0.25 * pi;
  // 2^0 Gamma(1/2) Gamma(3/2) = pi/2
  if (z < 1e-3) {
    const double z2 = z * z;
    return 0.25 * pi * (1.0 - z2 / 8.0 + z2 * z2 / 192.0);
  }
  return 0.5 * pi * bessel_j(1, z) / z;
}

AsymptoticValue j0_asymptotic(double t, int terms) {
  if (terms < 1) throw DomainError("asymptotic expansion needs at least one term");
  if (!std::isfinite(t)) throw DomainError("asymptotic argument must be finite");
  if (t < kAsymptoticMin)
    throw RangeError("asymptotic expansion used below t = " + std::to_string(kAsymptoticMin));

  // J_0 ~ sqrt(2/(pi t)) [cos w sum_l A_l t^{-2l} + sin w sum_l B_l t^{-2l-1}]
  // with A_l = (-1)^l a_{2l}(0), B_l = -(-1)^l a_{2l+1}(0).
  double pc = 0.0, ps = 0.0;
  double tp = 1.0;
  for (int l = 0; l < terms; ++l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    pc += sign * hankel_coefficient(2 * l) * tp;
    ps += -sign * hankel_coefficient(2 * l + 1) * tp / t;
    tp /= t * t;
  }
  const double next_c = std::fabs(hankel_coefficient(2 * terms)) * tp;
  const double next_s = std::fabs(hankel_coefficient(2 * terms + 1)) * tp / t;
  double c, s;
  hankel_angle(0, t, c, s);
  const double amp = std::sqrt(2.0 / (std::numbers::pi * t));
  return {amp * (c * pc + s * ps), amp * (next_c + next_s)};
}

const AsymptoticCoeffs& asymptotic_coeffs() {
  static const AsymptoticCoeffs coeffs = [] {
    using std::numbers::pi;
    const double r = 1.0 / std::sqrt(2.0 * pi);
    const auto z1 = std::polar(r, -pi / 4.0);
    const auto z2 = std::polar(r / 8.0, -3.0 * pi / 4.0);
    const auto z5 = std::polar(r, -3.0 * pi / 4.0);
    AsymptoticCoeffs c;
    c.z = {z1, z2, std::conj(z1), std::conj(z2), z5, std::conj(z5)};
    return c;
  }();
  return coeffs;
}

TwoTermForm complex_two_term(double t) {
  if (!std::isfinite(t)) throw DomainError("two-term form argument must be finite");
  if (t < kAsymptoticMin)
    throw RangeError("two-term form used below t = " + std::to_string(kAsymptoticMin));
  const auto& z = asymptotic_coeffs().z;
  const double h = 1.0 / std::sqrt(t);
  const double h3 = h * h * h;
  TwoTermForm f;
  f.t = t;
  f.j0_plus = z[0] * h + z[1] * h3;
  f.j0_minus = z[2] * h + z[3] * h3;
  f.j1t_plus = z[4] * h3;
  f.j1t_minus = z[5] * h3;
  return f;
}

double TwoTermForm::j0() const {
  const auto e = std::polar(1.0, t);
  return std::real(e * j0_plus + std::conj(e) * j0_minus);
}

double TwoTermForm::j1_over_t() const {
  const auto e = std::polar(1.0, t);
  return std::real(e * j1t_plus + std::conj(e) * j1t_minus);
}

}  // namespace hyperdisp::specfun
