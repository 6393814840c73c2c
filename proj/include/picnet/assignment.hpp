// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef PICNET_ASSIGNMENT_HPP
#define PICNET_ASSIGNMENT_HPP

#include <vector>

namespace picnet {

// Minimum-cost perfect matching on a dense n x n cost matrix (row-major).
// Shortest augmenting path with dual potentials, O(n^3).
// If `match` is non-null it receives the column assigned to each row.
double solve_assignment(const std::vector<double>& cost, int n,
                        std::vector<int>* match = nullptr);

}  // namespace picnet

#endif  // PICNET_ASSIGNMENT_HPP
