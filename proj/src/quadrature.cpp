#include "hyperdisp/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "hyperdisp/errors.hpp"

namespace hyperdisp {

const GaussRule& gauss_legendre(int order) {
  static std::mutex lock;
  static std::map<int, GaussRule> cache;
  if (order < 1) throw DomainError("Gauss-Legendre order must be positive");
  std::lock_guard guard(lock);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0L;
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    // recompute derivative at the converged node
    long double p0 = 1.0L, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0L;
    dp = n * (x * p1 - p0) / (x * x - 1.0L);
    const double w = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
    rule.nodes[i] = -static_cast<double>(x);
    rule.nodes[n - 1 - i] = static_cast<double>(x);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(order, std::move(rule)).first->second;
}

NodeSet composite_gauss(std::span<const double> breaks, int order) {
  const GaussRule& g = gauss_legendre(order);
  NodeSet out;
  if (breaks.size() < 2) return out;
  out.nodes.reserve((breaks.size() - 1) * order);
  out.weights.reserve((breaks.size() - 1) * order);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    if (!(b > a)) throw DomainError("panel breakpoints must increase");
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < order; ++i) {
      out.nodes.push_back(mid + half * g.nodes[i]);
      out.weights.push_back(half * g.weights[i]);
    }
  }
  return out;
}

std::vector<double> graded_breaks(double upper, double panel, int levels) {
  if (!(upper > 0.0) || !(panel > 0.0)) throw DomainError("graded grid needs positive extent");
  std::vector<double> b{0.0};
  const double first = std::min(panel, upper);
  for (int l = levels; l >= 1; --l) b.push_back(first * std::ldexp(1.0, -l));
  double x = first;
  while (x < upper * (1.0 - 1e-12)) {
    b.push_back(x);
    x += panel;
  }
  b.push_back(upper);
  return b;
}

std::vector<double> ChebyshevPanel::points(double a, double b, int count) {
  std::vector<double> x(count);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int j = 0; j < count; ++j)
    x[j] = mid - half * std::cos(std::numbers::pi * j / (count - 1));
  return x;
}

ChebyshevPanel::ChebyshevPanel(double a, double b, std::vector<double> values) : a_(a), b_(b) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw DomainError("Chebyshev panel needs at least two values");
  const int m = n - 1;
  coeffs_.assign(n, 0.0);
  // points() orders x ascending, so value j sits at angle pi (m - j) / m
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = (j == 0 || j == m) ? 0.5 : 1.0;
      acc += w * values[j] * std::cos(std::numbers::pi * static_cast<double>(k) * (m - j) / m);
    }
    coeffs_[k] = acc * 2.0 / m;
  }
  coeffs_[0] *= 0.5;
  coeffs_[m] *= 0.5;
}

double ChebyshevPanel::operator()(double x) const {
  const double u = (2.0 * x - a_ - b_) / (b_ - a_);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
    const double b0 = 2.0 * u * b1 - b2 + coeffs_[k];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + coeffs_[0];
}

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(order + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

double min_node_density(std::span<const double> x, std::size_t window) {
  const std::size_t n = x.size();
  double density = std::numeric_limits<double>::infinity();
  if (n < 2) return density;
  const std::size_t win = std::min(window, n);
  for (std::size_t i = 0; i + win <= n; ++i) {
    const double span = x[i + win - 1] - x[i];
    if (span > 0.0) density = std::min(density, (win - 1) / span);
  }
  return density;
}

double regression_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DegenerateInputError("regression needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw DegenerateInputError("regression abscissae are all equal");
  return sxy / sxx;
}

}  // namespace hyperdisp
