#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hyperdisp/phases.hpp"

namespace hyperdisp::kernel {

// 2^j s at and above which phi_{2^j lambda}(s) comes from the theta split.
inline constexpr double kThetaCrossover = 32.0;

// Lowest dyadic index summed; |2^j I_j| <= 3 pi 4^j / 2 below it.
inline constexpr int kLowestIndex = -30;

// Smooth cutoff chi (1 on |x| <= 1, 0 on |x| >= 2) built from the normalised
// integral of exp(-1/(x(1-x))), and eta(x) = chi(x/2) - chi(x).
class DyadicWindow {
 public:
  static const DyadicWindow& instance();

  double chi(double x) const;
  double eta(double x) const;
  // Derivatives of eta of order 0, 1, 2.
  double eta_derivative(double x, int order) const;
  // sup |eta^{(p)}| for p = 0, 1, 2, sampled on the support.
  std::array<double, 3> derivative_bounds() const;

 private:
  DyadicWindow();
  double step(double u) const;  // normalised integral of the bump on [0, u]
  std::vector<double> cumulative_;
  double norm_ = 1.0;
};

enum class TermClass { Low, J1, J2, J3 };
const char* class_name(TermClass c);

struct KernelOptions {
  double nodes_per_period = 8.0;
  double max_nodes = 4e8;    // per kernel evaluation
  double tolerance = 1e-6;   // last dyadic term relative to the total
  int chebyshev_nodes = 24;  // per panel of the phi oracle
  double chebyshev_phase = 3.0;  // lambda s change per oracle panel
};

struct KernelEntry {
  int j = 0;
  TermClass cls = TermClass::Low;
  std::complex<double> value;  // 2^j I_j
  double envelope = 0.0;    // class envelope without constant
  bool theta_split = false;
  std::size_t nodes = 0;
};

struct KernelReport {
  double s = 0.0, tau = 0.0;
  double a = 2.0, C1 = 1.0;
  int j_max = 0;
  double crossover = kThetaCrossover;
  std::vector<KernelEntry> entries;
  std::array<std::complex<double>, 4> class_totals{};
  std::array<int, 4> class_counts{};
  std::complex<double> I_total;
  double bound_product = 0.0;      // s |I_total|
  double j3_limit = 0.0;           // (2/(a-1)) log2(2 C1) + 2
  double max_class_violation = 0.0;  // max |2^j I_j| / envelope over high-frequency j
  double tail = 0.0;               // |2^{j_max} I_{j_max}| / |I_total|
  std::size_t nodes = 0;
};

TermClass classify(int j, double s, double tau, double a, double C1);
double class_envelope(TermClass c, int j, double s, double tau, double a);
double j3_limit(double a, double C1);

// J with Lambda = 2^{J+1}: the smooth cutoff chi(lambda/Lambda) equals the sum of
// the windows up to J.
int dyadic_limit(double Lambda);

// I_Lambda(s, tau) = int chi(lambda/Lambda) phi_lambda(s) e^{i tau psi(lambda)} tanh(pi lambda/2) dlambda.
std::complex<double> kernel_direct(double s, double tau, const phases::PhaseSpec& p,
                                   double Lambda, const KernelOptions& options = {});

// Sum of 2^j I_j for kLowestIndex <= j <= j_max. Throws TruncationError if the
// j_max term exceeds options.tolerance relative to the total.
KernelReport kernel_dyadic(double s, double tau, const phases::PhaseSpec& p, int j_max,
                           const KernelOptions& options = {});
// Same sum without the tail check.
KernelReport kernel_dyadic_partial(double s, double tau, const phases::PhaseSpec& p, int j_max,
                                   const KernelOptions& options = {});

// phi_{2^j lambda}(s) = sum_k theta-terms + remainder, x = 2^j lambda s:
//   e^{ix}(theta1 x^{-1/2} + theta2 x^{-3/2}) + e^{-ix}(theta3 x^{-1/2} + theta4 x^{-3/2}).
struct ThetaSplit {
  double x = 0.0;
  std::array<std::complex<double>, 4> theta{};
  double remainder = 0.0;
  double leading() const;  // theta terms only
};

// Coefficients theta_k(s) for 0 < s < 1.
std::array<std::complex<double>, 4> theta_coefficients(double s);

// Requires 2^j lambda s > 1; the remainder uses the IntegralRep oracle.
ThetaSplit bessel_term_split(int j, double lambda, double s);

struct SweepRow {
  double s = 0.0, tau = 0.0, Lambda = 0.0;
  std::complex<double> I;
  double abs_I = 0.0, s_abs_I = 0.0;
  std::array<int, 4> counts{};
  double max_class_violation = 0.0;
  bool failed = false;
  std::string error;
};

struct SweepSummary {
  std::vector<SweepRow> rows;  // grid order: s outer, then tau, then Lambda
  double max_s_abs = 0.0;
  int max_j3 = 0;
  int failures = 0;
  std::vector<double> s_values;
  std::vector<double> max_by_s;  // max over tau and Lambda of s |I|
  double trend = 0.0;            // slope of log max_by_s against log s
  double lambda_spread = 0.0;    // max relative spread of |I| across Lambda at fixed (s, tau)
};

SweepSummary bound_sweep(const phases::PhaseSpec& p, std::span<const double> s_list,
                         std::span<const double> tau_list, std::span<const double> Lambda_list,
                         int workers = 1, const KernelOptions& options = {});

// int_0^r D(s)/s ds, the radial form of the local integrability of d(x, y)^{-1},
// by Gauss-Legendre on `panels` equal panels of order 16.
double geodesic_potential(double r, int panels = 8);

}  // namespace hyperdisp::kernel
