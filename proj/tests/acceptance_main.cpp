#include <algorithm>
#include <iostream>
#include <string>
#include <thread>

#include "hyperdisp/acceptance.hpp"

// Full-size acceptance run: one PASS/FAIL line per criterion. `--quick` shrinks
// the sweeps of criteria 7 and 8.
int main(int argc, char** argv) {
  hyperdisp::acceptance::Options o;
  o.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--quick") o.quick = true;
  int failed = 0;
  hyperdisp::acceptance::run_all(o, [&](const hyperdisp::acceptance::Result& r) {
    std::cout << hyperdisp::acceptance::format(r) << std::endl;
    failed += r.pass ? 0 : 1;
  });
  std::cout << failed << " of " << hyperdisp::acceptance::kCriteria << " criteria failed\n";
  return failed == 0 ? 0 : 1;
}
