// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef PICNET_COMMON_HPP
#define PICNET_COMMON_HPP

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace picnet {

/// Raised on malformed inputs: dimension mismatches, invalid weights,
/// bad configuration files.  CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when an enumeration (permutations, transport vertices, weight
/// pairs) exceeds the compile budget.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

using Vec = std::vector<double>;

/// Enumeration budget shared by every compiler in this library.  The default
/// admits N! for N<=5 and all weight-pair counts up to 200.  Overridable via
/// the PICNET_BUDGET environment variable.
std::size_t enumeration_budget();

/// Formats a double with 17 significant digits, enough to round-trip the
/// value exactly through text.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

inline double l1_norm(const Vec& v) {
  double s = 0;
  for (double x : v) s += x < 0 ? -x : x;
  return s;
}

inline double l1_dist(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw ConfigError("l1_dist: dimension mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d < 0 ? -d : d;
  }
  return s;
}

}  // namespace picnet

#endif  // PICNET_COMMON_HPP
