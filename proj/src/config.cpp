#include "hyperdisp/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "hyperdisp/errors.hpp"

namespace hyperdisp {
namespace {

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

bool finite_all(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

void validate(const RunConfig& c) {
  require(c.degree > 1.0 && c.degree <= 8.0, "degree must lie in (1, 8]");
  require(!c.lambdas.empty() && finite_all(c.lambdas), "lambdas must be a non-empty list of numbers");
  require(!c.radii.empty() && finite_all(c.radii), "radii must be a non-empty list of numbers");
  for (double s : c.radii) require(s >= 0.0, "radii must be >= 0");
  require(c.method == "integral" || c.method == "ode" || c.method == "series",
          "method must be integral, ode or series");
  require(c.series_terms == 1 || c.series_terms == 2, "series_terms must be 1 or 2");
  require(c.profile == "gaussian" || c.profile == "random" || c.profile == "zero",
          "profile must be gaussian, random or zero");
  require(c.width > 0.0 && c.width <= 2.0, "width must lie in (0, 2]");
  require(c.s_max > 0.0 && c.s_max <= 10.0, "s_max must lie in (0, 10]");
  require(c.radial_panel > 0.0 && c.radial_panel <= c.s_max, "radial_panel must lie in (0, s_max]");
  require(c.lambda_max > 0.0 && c.lambda_max <= 1e4, "lambda_max must lie in (0, 1e4]");
  require(c.spectral_panel > 0.0 && c.spectral_panel <= c.lambda_max,
          "spectral_panel must lie in (0, lambda_max]");
  require(!c.times.empty() && finite_all(c.times), "times must be a non-empty list of numbers");
  for (std::size_t j = 0; j < c.times.size(); ++j) {
    require(c.times[j] >= 0.0 && c.times[j] < 1.0, "times must lie in [0, 1)");
    require(j == 0 || c.times[j] > c.times[j - 1], "times must increase");
  }
  require(c.field == "abs" || c.field == "re" || c.field == "im", "field must be abs, re or im");
  for (double s : c.kernel_s) require(s > 0.0 && s < 1.0, "kernel_s entries must lie in (0, 1)");
  for (double t : c.kernel_tau) require(std::fabs(t) < 1.0, "kernel_tau entries must satisfy |tau| < 1");
  for (double L : c.kernel_lambda) {
    int e = 0;
    require(L >= 2.0 && std::frexp(L, &e) == 0.5 && L <= 65536.0,
            "kernel_lambda entries must be powers of two in [2, 2^16]");
  }
  for (int k : c.octaves) require(k >= 0 && k <= 12, "octaves must lie in [0, 12]");
  for (double b : c.betas) require(b >= 0.0 && b <= 2.0, "betas must lie in [0, 2]");
  for (double r : c.potential_radii)
    require(r >= 0.0 && r <= 5.0, "potential_radii must lie in [0, 5]");
  require(c.mode == "quick" || c.mode == "full", "mode must be quick or full");
  require(c.inject_fault.empty() || c.inject_fault == "c0", "inject_fault must be empty or c0");
  require(c.tolerance > 0.0 && c.tolerance < 1.0, "tolerance must lie in (0, 1)");
  require(c.workers >= 1 && c.workers <= 256, "workers must lie in [1, 256]");
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
  return {
      {"command", c.command},
      {"phase", c.phase},
      {"degree", num(c.degree)},
      {"lambdas", join(c.lambdas)},
      {"radii", join(c.radii)},
      {"method", c.method},
      {"series_terms", std::to_string(c.series_terms)},
      {"profile", c.profile},
      {"width", num(c.width)},
      {"s_max", num(c.s_max)},
      {"radial_panel", num(c.radial_panel)},
      {"lambda_max", num(c.lambda_max)},
      {"spectral_panel", num(c.spectral_panel)},
      {"times", join(c.times)},
      {"field", c.field},
      {"kernel_s", join(c.kernel_s)},
      {"kernel_tau", join(c.kernel_tau)},
      {"kernel_lambda", join(c.kernel_lambda)},
      {"octaves", join(c.octaves)},
      {"betas", join(c.betas)},
      {"potential_radii", join(c.potential_radii)},
      {"mode", c.mode},
      {"inject_fault", c.inject_fault},
      {"tolerance", num(c.tolerance)},
      {"output", c.output},
      {"output_dir", c.output_dir},
      {"workers", std::to_string(c.workers)},
      {"seed", std::to_string(c.seed)},
  };
}

std::string output_path(const RunConfig& c) {
  if (c.output.empty() || c.output == "-") return {};
  const std::filesystem::path p(c.output);
  if (p.is_absolute()) return p.string();
  std::string dir = c.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) dir = env;
  return (std::filesystem::path(dir) / p).string();
}

}  // namespace hyperdisp
