// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef PICNET_W1NET_HPP
#define PICNET_W1NET_HPP

#include <vector>

#include "picnet/measures.hpp"
#include "picnet/netbuilder.hpp"

namespace picnet::w1net {

// Extremal point of the transport polytope U(w, v): entries are exact
// rationals over C, support is a spanning forest of the bipartite graph.
struct TransportVertex {
  int N = 0;
  int C = 1;
  std::vector<long long> plan_num;  // N*N numerators over C, row-major
  measures::ContextWeights w, v;

  Vec plan() const;
  int support_size() const;
};

// All vertices of U(w, v), via spanning trees of the complete bipartite
// graph, exact rational marginal solves, and exact deduplication.
std::vector<TransportVertex> enumerate_transport_vertices(const measures::ContextWeights& w,
                                                          const measures::ContextWeights& v);

// Exact W1 net for uniform weights: min over all N! permutations of the
// mean l1 matching cost.  Input layout [vec(X) | vec(Y)], row-major.
netbuilder::CompiledNet build_w1_uniform(int N, int d);

// Exact W1 net for one fixed weight pair: min over transport vertices of
// <cost matrix, P_k>.  Input layout [vec(X) | vec(Y)].
netbuilder::CompiledNet build_w1_fixed_weights(const measures::ContextWeights& w,
                                               const measures::ContextWeights& v, int d);

// Exact W1 net over every weight pair in the contextualized simplex, with
// threshold gates selecting the active fixed-weight net.
// Input layout [vec(X) | w | vec(Y) | v].
netbuilder::CompiledNet build_w1_contextual(int C, int N, int d);

// Input vector for the uniform/fixed nets.
Vec pack_atoms(const measures::PICMeasure& a, const measures::PICMeasure& b);
// Input vector for the contextual net.
Vec pack_contextual(const measures::PICMeasure& a, const measures::PICMeasure& b);

}  // namespace picnet::w1net

#endif  // PICNET_W1NET_HPP
