// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef PICNET_SIMPLEX_HPP
#define PICNET_SIMPLEX_HPP

#include <vector>

namespace picnet {

struct LpResult {
  bool ok = false;
  double value = 0.0;
  std::vector<double> x;
};

// maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0.
// Dense tableau simplex with Bland's pivoting rule.  Intended for the small
// dual programs in this library (tens of variables), not general use.
LpResult simplex_maximize(const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b,
                          const std::vector<double>& c);

}  // namespace picnet

#endif  // PICNET_SIMPLEX_HPP
