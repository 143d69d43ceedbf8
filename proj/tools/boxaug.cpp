// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "boxaug/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return boxaug::cli::run(args, std::cout, std::cerr);
}
