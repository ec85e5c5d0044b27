#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dasr/cli/run_config.hpp"

namespace dasr::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2, kEvalErrors = 3 };

const std::vector<std::string>& command_names();

// Runs one subcommand against a resolved config. Returns an ExitCode;
// library exceptions propagate.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out);

// Full command line: `dasr <subcommand> --config FILE [--set k=v ...] [--seed N] [--deterministic]`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dasr::cli
