// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "density_lab/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return density_lab::cli::run(args, std::cout, std::cerr);
}
