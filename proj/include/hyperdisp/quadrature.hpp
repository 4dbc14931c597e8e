#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hyperdisp {

// Neumaier-compensated running sum.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], increasing
  std::vector<double> weights;
};

// Gauss-Legendre rule of the given order, computed once and cached.
const GaussRule& gauss_legendre(int order);

struct NodeSet {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// Composite Gauss-Legendre rule on consecutive breakpoints.
NodeSet composite_gauss(std::span<const double> breaks, int order);

// Breakpoints 0, h 2^-levels, ..., h/2, h, 2h, ..., upper (last panel may be shorter).
std::vector<double> graded_breaks(double upper, double panel, int levels);

// Chebyshev interpolant on [a, b] through second-kind (extrema) points.
class ChebyshevPanel {
 public:
  ChebyshevPanel() = default;
  ChebyshevPanel(double a, double b, std::vector<double> values);
  static std::vector<double> points(double a, double b, int count);
  double operator()(double x) const;
  double lower() const { return a_; }
  double upper() const { return b_; }

 private:
  double a_ = 0.0, b_ = 1.0;
  std::vector<double> coeffs_;
};

// Finite-difference weights (Fornberg) for derivatives 0..order at x0.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int order);

// Smallest number of nodes per unit length over windows of `window` consecutive
// nodes (ascending). Infinity for fewer than two distinct nodes.
double min_node_density(std::span<const double> x, std::size_t window = 16);

// Ordinary least-squares slope of y on x.
double regression_slope(std::span<const double> x, std::span<const double> y);

}  // namespace hyperdisp
