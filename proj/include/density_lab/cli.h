// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace density_lab::cli {

/// Process exit codes. No other values are ever returned.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kNonConvergence = 2,
};

/// Runs `density-lab` with `args` (args[0] is the program name). Reads an
/// optional TOML config named by --config or $DENSITY_LAB_CONFIG; flags take
/// precedence over the config file, which takes precedence over defaults.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace density_lab::cli
