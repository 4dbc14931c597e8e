#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hyperdisp {

// Output directory override; applies to relative output paths only.
inline constexpr const char* kOutputDirEnv = "HYPERDISP_OUTPUT_DIR";

struct RunConfig {
  std::string command;

  // phases
  std::string phase = "schrodinger";
  double degree = 2.0;

  // phi
  std::vector<double> lambdas{0.0, 1.0, 5.0};
  std::vector<double> radii{0.0, 0.5};
  std::string method = "integral";  // integral | ode | series
  int series_terms = 1;

  // transform / evolve
  std::string profile = "gaussian";  // gaussian | random | zero
  double width = 0.5;
  double s_max = 4.0;
  double radial_panel = 0.25;
  double lambda_max = 40.0;
  double spectral_panel = 1.0;
  std::vector<double> times{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::string field = "abs";  // abs | re | im

  // kernel
  std::vector<double> kernel_s{0.25, 0.125, 0.0625};
  std::vector<double> kernel_tau{0.5, -0.5, 0.0625, -0.0625};
  std::vector<double> kernel_lambda{256.0};

  // maximal
  std::vector<int> octaves{3, 4, 5, 6};
  std::vector<double> betas{0.5, 0.0};

  // geodesic-potential
  std::vector<double> potential_radii{0.5, 1.0};

  // verify
  std::string mode = "quick";  // quick | full
  std::string inject_fault;    // "" | c0

  double tolerance = 1e-6;
  std::string output;            // empty or "-" writes to stdout
  std::string output_dir = ".";
  int workers = 1;
  std::uint64_t seed = 20240611;
};

// Throws UsageError on out-of-range values.
void validate(const RunConfig& c);

// Every key with its value, for CSV metadata.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c);

// Output path after applying output_dir and the environment override; empty for stdout.
std::string output_path(const RunConfig& c);

}  // namespace hyperdisp
