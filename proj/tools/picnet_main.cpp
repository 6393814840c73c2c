// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include <string>
#include <vector>

#include "picnet/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return picnet::harness::cli(args);
}
