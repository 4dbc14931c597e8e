#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace hyperdisp::phases {

enum class Family { FracSchrodinger, Boussinesq, Beam, Custom };

using RealFn = std::function<double(double)>;

// psi(lambda) = Psi(sqrt(lambda^2 + 1)) with derivatives in lambda.
struct PhaseSpec {
  std::string name;
  Family family = Family::Custom;
  double a = 2.0;  // degree
  RealFn outer;    // Psi(r)
  RealFn psi, dpsi, d2psi, d3psi;
  double C1 = 1.0, C2 = 1.0, C3 = 1.0;
  bool validated = false;
};

PhaseSpec frac_schrodinger(double a);
PhaseSpec boussinesq();
PhaseSpec beam();

// Derivatives by 4th-order Richardson-extrapolated central differences.
PhaseSpec custom(std::string name, RealFn outer, double a);

// "schrodinger" (a = 2), "frac" (degree a), "boussinesq", "beam".
PhaseSpec make_phase(std::string_view name, double a = 2.0);

struct AdmissibilityReport {
  double lambda_max = 0.0;
  int samples = 0;
  double r1_min = 0.0, r1_max = 0.0;  // |psi'| / lambda^{a-1}
  double r2_min = 0.0, r2_max = 0.0;  // |psi''| / lambda^{a-2}
  double r3_max = 0.0;                // |psi'''| lambda^{3-a}
  double trend1 = 0.0, trend2 = 0.0, trend3 = 0.0;  // log-log slopes over the upper half
  double C1 = 1.0, C2 = 1.0, C3 = 1.0;
};

// Log-spaced sampling of the derivative ratios on (1, lambda_max]. Throws
// AdmissibilityError if a ratio vanishes, diverges, or drifts across decades.
AdmissibilityReport validate_phase(const PhaseSpec& p, double lambda_max, int samples);

// Copy of p carrying the constants of validate_phase.
PhaseSpec validated(PhaseSpec p, double lambda_max = 1e4, int samples = 200);

}  // namespace hyperdisp::phases
