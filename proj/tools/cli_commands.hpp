#pragma once

// The six subcommands.  Each returns the process exit code (0 on success;
// cmd_oracle returns 4 when the simulation disagrees with the prediction
// beyond tolerance).  Configuration and numerical errors propagate as
// exceptions and are mapped to exit codes in main().

#include "cli_config.hpp"

namespace qswitch::cli {

int cmd_fom(const CliOptions& opts);
int cmd_sweep(const CliOptions& opts);
int cmd_optimize(const CliOptions& opts);
int cmd_profile(const CliOptions& opts);
int cmd_channel(const CliOptions& opts);
int cmd_oracle(const CliOptions& opts);

}  // namespace qswitch::cli
