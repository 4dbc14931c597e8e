#pragma once

#include <ostream>

#include "hyperdisp/config.hpp"

namespace hyperdisp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitUsage = 2;

// Parses arguments (subcommand, --config file, --key value flags), runs the
// subcommand, and returns the process exit code. Tables go to `out` unless an
// output file is configured; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Subcommands on a validated configuration. Each returns an exit code.
int cmd_phi(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_transform(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_evolve(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_kernel(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_maximal(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_geodesic_potential(const RunConfig& c, std::ostream& out, std::ostream& err);
// Exit code is the number of failed criteria, capped at 125.
int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err);

}  // namespace hyperdisp::cli
