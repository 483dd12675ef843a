/**
 * @file cli.hpp
 * @brief Experiment runner behind the `greyvar` executable.
 *
 * Subcommands: profile, shells, estimate, fourier, mc-variance, theory-variance,
 * scaling-study. Configuration comes from `--config FILE`, then `--set key=value`
 * overrides, then the GREYVAR_SEED environment variable.
 */
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace greyvar {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of run_cli.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitNumerical = 3 };

/// Runs one subcommand. `args` excludes the program name. Errors are reported as a
/// single-line JSON record on `err` (and in `<output>/error.json` when possible).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace greyvar
