// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/assignment.hpp"

#include <limits>

#include "picnet/common.hpp"

namespace picnet {

double solve_assignment(const std::vector<double>& cost, int n, std::vector<int>* match) {
  if (n <= 0 || static_cast<int>(cost.size()) != n * n)
    throw ConfigError("solve_assignment: bad cost matrix");
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; p[j] = row matched to column j, column 0 is virtual.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0;
  if (match) match->assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] == 0) continue;
    total += cost[(p[j] - 1) * n + (j - 1)];
    if (match) (*match)[p[j] - 1] = j - 1;
  }
  return total;
}

}  // namespace picnet
