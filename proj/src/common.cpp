// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/common.hpp"

#include <cstdlib>

namespace picnet {

std::size_t enumeration_budget() {
  if (const char* env = std::getenv("PICNET_BUDGET")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw ConfigError("PICNET_BUDGET must be a positive integer");
  }
  return 200;
}

}  // namespace picnet
