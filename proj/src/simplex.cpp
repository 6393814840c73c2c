// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/simplex.hpp"

#include <cmath>

#include "picnet/common.hpp"

namespace picnet {

namespace {
constexpr double kEps = 1e-11;
}

LpResult simplex_maximize(const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b, const std::vector<double>& c) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(A[i].size()) != n) throw ConfigError("simplex: ragged A");
    if (b[i] < -kEps) throw ConfigError("simplex: requires b >= 0");
  }

  // Tableau with slack basis: columns [x | s | rhs].
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + m + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = A[i][j];
    t[i][n + i] = 1.0;
    t[i][n + m] = b[i] < 0 ? 0.0 : b[i];
  }
  for (int j = 0; j < n; ++j) t[m][j] = -c[j];

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const long max_iter = 200L * (m + n) * (m + n) + 10000;
  for (long iter = 0; iter < max_iter; ++iter) {
    // Bland: entering column = lowest index with negative reduced cost.
    int col = -1;
    for (int j = 0; j < n + m; ++j) {
      if (t[m][j] < -kEps) {
        col = j;
        break;
      }
    }
    if (col < 0) break;  // optimal

    int row = -1;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t[i][col] > kEps) {
        double ratio = t[i][n + m] / t[i][col];
        if (row < 0 || ratio < best - kEps ||
            (std::fabs(ratio - best) <= kEps && basis[i] < basis[row])) {
          row = i;
          best = ratio;
        }
      }
    }
    if (row < 0) return {};  // unbounded

    double piv = t[row][col];
    for (double& v : t[row]) v /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == row) continue;
      double f = t[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j <= n + m; ++j) t[i][j] -= f * t[row][j];
    }
    basis[row] = col;
  }

  LpResult res;
  res.ok = true;
  res.value = t[m][n + m];
  res.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t[i][n + m];
  return res;
}

}  // namespace picnet
