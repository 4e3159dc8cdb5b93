#pragma once

#include <iosfwd>

#include "rotorlab/cli/config.hpp"

namespace rotorlab::cli {

enum ExitCode : int {
  kOk = 0,
  kInvariantFailure = 1,
  kConfigError = 2,
  kSolverFailure = 3,
  kDynamicsHalt = 4,
};

// Each command writes its result to config.output (a file or `out`) and
// diagnostics to `err`, and returns an exit code. Library errors are mapped
// to exit codes here.
int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_scan(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_geodesic(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_hj(const RunConfig& config, std::ostream& out, std::ostream& err);
/// `json` selects the machine-readable report regardless of output.format.
int cmd_check(const RunConfig& config, bool json, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rotorlab::cli
