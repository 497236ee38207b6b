#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "necrosim/cli/config.hpp"

namespace necrosim::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitCritical = 2, kExitVerify = 3, kExitNumerical = 4 };

/// Destination for a command's report and files. Files go to output_dir only when write_files is set.
struct CommandContext {
  std::ostream& out;
  std::ostream& err;
  bool write_files = false;
  /// Perturbs K inside the verify Wronskian check.
  bool bessel_fault = false;
};

int cmd_stationary(const RunConfig& config, const CommandContext& ctx);
int cmd_spectrum(const RunConfig& config, const CommandContext& ctx);
int cmd_evolve(const RunConfig& config, const CommandContext& ctx);
int cmd_verify(const RunConfig& config, const CommandContext& ctx);
int cmd_sweep(const RunConfig& config, const CommandContext& ctx);

/// Entry point of the necrosim executable; args excludes the program name.
/// Errors are reported on err and mapped to ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace necrosim::cli
