#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hyperdisp::acceptance {

inline constexpr int kCriteria = 9;

struct Options {
  bool quick = false;        // reduced grids for criteria 7 and 8
  std::string inject_fault;  // "c0" perturbs the series normalisation in criterion 2
  int workers = 1;
  std::uint64_t seed = 20240611;
};

struct Result {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

Result run_criterion(int id, const Options& options);

// Runs criteria 1..kCriteria in order, reporting each as it finishes.
std::vector<Result> run_all(const Options& options,
                            const std::function<void(const Result&)>& on_result = {});

// "PASS 3 Bessel asymptotics: ... (0.1 s)"
std::string format(const Result& r);

// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hyperdisp::acceptance
