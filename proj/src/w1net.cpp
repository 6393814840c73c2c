// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/w1net.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace picnet::w1net {

using measures::ContextWeights;
using measures::PICMeasure;
using netbuilder::CompiledNet;

namespace {

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Affine picking rows x_i - y_{pi(i)} (or pairwise differences) out of the
// packed [vec(X) | vec(Y)] input.
Affine diff_rows(int N, int d, const std::vector<std::pair<int, int>>& pairs) {
  Affine a(SparseMatrix(static_cast<int>(pairs.size()) * d, 2 * N * d),
           Vec(static_cast<int>(pairs.size()) * d, 0.0));
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    auto [i, j] = pairs[t];
    for (int c = 0; c < d; ++c) {
      a.W.add(static_cast<int>(t) * d + c, i * d + c, 1.0);
      a.W.add(static_cast<int>(t) * d + c, N * d + j * d + c, -1.0);
    }
  }
  return a;
}

}  // namespace

Vec TransportVertex::plan() const {
  Vec p(plan_num.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(plan_num[i]) / C;
  return p;
}

int TransportVertex::support_size() const {
  int s = 0;
  for (long long v : plan_num)
    if (v != 0) ++s;
  return s;
}

std::vector<TransportVertex> enumerate_transport_vertices(const ContextWeights& w,
                                                          const ContextWeights& v) {
  if (w.C != v.C || w.tokens() != v.tokens())
    throw ConfigError("enumerate_transport_vertices: weights must share C and N");
  const int N = w.tokens();
  const int C = w.C;

  std::set<std::vector<long long>> seen;
  std::vector<TransportVertex> out;
  auto push_plan = [&](const std::vector<long long>& plan) {
    if (!seen.insert(plan).second) return;
    TransportVertex tv;
    tv.N = N;
    tv.C = C;
    tv.plan_num = plan;
    tv.w = w;
    tv.v = v;
    out.push_back(std::move(tv));
  };

  if (N == 1) {
    push_plan({C});
    return out;
  }

  // Every vertex is the unique solution of the marginal equations on a
  // spanning tree of K_{N,N}; enumerate all (2N-1)-edge spanning trees,
  // solve by leaf elimination in integers over C, keep nonnegative plans.
  const int E = N * N;
  const int nodes = 2 * N;
  std::vector<int> edge(2 * N - 1);
  std::iota(edge.begin(), edge.end(), 0);

  std::vector<long long> need(nodes);
  auto solve_tree = [&](const std::vector<int>& edges) {
    // adjacency over chosen edges
    std::vector<std::vector<std::pair<int, int>>> adj(nodes);  // (other node, edge idx)
    for (std::size_t t = 0; t < edges.size(); ++t) {
      int r = edges[t] / N, c = edges[t] % N;
      adj[r].push_back({N + c, static_cast<int>(t)});
      adj[N + c].push_back({r, static_cast<int>(t)});
    }
    // spanning + acyclic check: 2N-1 edges and connected
    {
      std::vector<char> vis(nodes, 0);
      std::vector<int> stack{0};
      vis[0] = 1;
      int count = 1;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (auto [o, e] : adj[u]) {
          (void)e;
          if (!vis[o]) {
            vis[o] = 1;
            ++count;
            stack.push_back(o);
          }
        }
      }
      if (count != nodes) return;
    }
    for (int i = 0; i < N; ++i) need[i] = w.num[i];
    for (int j = 0; j < N; ++j) need[N + j] = v.num[j];
    std::vector<int> degree(nodes, 0);
    for (int u = 0; u < nodes; ++u) degree[u] = static_cast<int>(adj[u].size());
    std::vector<char> edge_done(edges.size(), 0), node_done(nodes, 0);
    std::vector<long long> value(edges.size(), 0);
    std::vector<int> leaves;
    for (int u = 0; u < nodes; ++u)
      if (degree[u] == 1) leaves.push_back(u);
    std::size_t solved = 0;
    while (!leaves.empty()) {
      int u = leaves.back();
      leaves.pop_back();
      if (node_done[u]) continue;
      node_done[u] = 1;
      int live = -1;
      for (auto [o, e] : adj[u]) {
        (void)o;
        if (!edge_done[e]) {
          live = e;
          break;
        }
      }
      if (live < 0) continue;
      value[live] = need[u];
      edge_done[live] = 1;
      ++solved;
      int r = edges[live] / N, c = N + edges[live] % N;
      int other = (u == r) ? c : r;
      need[other] -= need[u];
      need[u] = 0;
      if (--degree[other] == 1 && !node_done[other]) leaves.push_back(other);
    }
    if (solved != edges.size()) return;
    std::vector<long long> plan(N * N, 0);
    for (std::size_t t = 0; t < edges.size(); ++t) {
      if (value[t] < 0) return;  // infeasible basic solution
      plan[edges[t]] += value[t];
    }
    push_plan(plan);
  };

  // enumerate all (2N-1)-subsets of the N^2 edges
  for (;;) {
    solve_tree(edge);
    int i = static_cast<int>(edge.size()) - 1;
    while (i >= 0 && edge[i] == E - static_cast<int>(edge.size()) + i) --i;
    if (i < 0) break;
    ++edge[i];
    for (std::size_t k = i + 1; k < edge.size(); ++k) edge[k] = edge[k - 1] + 1;
  }
  std::sort(out.begin(), out.end(),
            [](const TransportVertex& a, const TransportVertex& b) {
              return a.plan_num < b.plan_num;
            });
  return out;
}

Vec pack_atoms(const PICMeasure& a, const PICMeasure& b) {
  Vec x;
  x.reserve(2 * a.tokens() * a.d);
  for (const auto& atom : a.atoms) x.insert(x.end(), atom.begin(), atom.end());
  for (const auto& atom : b.atoms) x.insert(x.end(), atom.begin(), atom.end());
  return x;
}

Vec pack_contextual(const PICMeasure& a, const PICMeasure& b) {
  Vec x;
  for (const auto& atom : a.atoms) x.insert(x.end(), atom.begin(), atom.end());
  for (int k : a.weights.num) x.push_back(static_cast<double>(k) / a.C());
  for (const auto& atom : b.atoms) x.insert(x.end(), atom.begin(), atom.end());
  for (int k : b.weights.num) x.push_back(static_cast<double>(k) / b.C());
  return x;
}

// Recorded sizes stay within explicit caps checked by the suites:
// depth <= N*d + ceil(log2 N!) + 1 and width <= 2 * N! * N^2 * d + 2.
CompiledNet build_w1_uniform(int N, int d) {
  if (N < 1 || d < 1) throw ConfigError("build_w1_uniform: N and d must be positive");
  long long K = factorial(N);
  if (static_cast<std::size_t>(K) > enumeration_budget())
    throw CapacityError("build_w1_uniform: N! exceeds the enumeration budget");

  // One branch per permutation: mean l1 cost of the induced matching,
  // an l1 gadget on the stacked difference vector of length N*d.
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<CompiledNet> branches;
  do {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < N; ++i) pairs.push_back({i, perm[i]});
    CompiledNet l1 = netbuilder::build_l1_norm(N * d);
    Affine avg(SparseMatrix(1, 1), Vec(1, 0.0));
    avg.W.add(0, 0, 1.0 / N);
    branches.push_back(
        netbuilder::pre_affine(netbuilder::post_affine(std::move(l1), avg), diff_rows(N, d, pairs)));
  } while (std::next_permutation(perm.begin(), perm.end()));

  CompiledNet net = netbuilder::fanout(branches);
  if (K > 1) net = netbuilder::compose(netbuilder::build_min(static_cast<int>(K)), net);
  net.role = "w1_uniform";
  net.tags = {{"N", N}, {"d", d}};
  return net;
}

CompiledNet build_w1_fixed_weights(const ContextWeights& w, const ContextWeights& v, int d) {
  if (d < 1) throw ConfigError("build_w1_fixed_weights: d must be positive");
  const int N = w.tokens();
  std::vector<TransportVertex> vertices = enumerate_transport_vertices(w, v);
  if (vertices.empty()) throw ConfigError("build_w1_fixed_weights: empty transport polytope");
  if (vertices.size() > enumeration_budget())
    throw CapacityError("build_w1_fixed_weights: vertex count exceeds the enumeration budget");

  // Cost stage: all N^2 pairwise l1 distances.
  std::vector<CompiledNet> cost_branches;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) pairs.push_back({i, j});
  for (int t = 0; t < N * N; ++t) cost_branches.push_back(netbuilder::build_l1_norm(d));
  CompiledNet costs =
      netbuilder::pre_affine(netbuilder::stack(cost_branches), diff_rows(N, d, pairs));

  // One inner-product gadget per vertex, the plan entering as a bias block.
  std::vector<CompiledNet> ip_branches;
  for (const auto& vert : vertices) {
    CompiledNet ip = netbuilder::build_inner_product(N * N);
    Affine pairup(SparseMatrix(2 * N * N, N * N), Vec(2 * N * N, 0.0));
    for (int t = 0; t < N * N; ++t) pairup.W.add(t, t, 1.0);
    Vec plan = vert.plan();
    for (int t = 0; t < N * N; ++t) pairup.c[N * N + t] = plan[t];
    ip_branches.push_back(netbuilder::pre_affine(std::move(ip), pairup));
  }
  CompiledNet ips = netbuilder::fanout(ip_branches);
  CompiledNet net = netbuilder::compose(ips, costs);
  if (vertices.size() > 1)
    net = netbuilder::compose(netbuilder::build_min(static_cast<int>(vertices.size())), net);
  net.role = "w1_fixed";
  net.tags = {{"C", w.C}, {"N", N}, {"d", d}};
  return net;
}

CompiledNet build_w1_contextual(int C, int N, int d) {
  if (C < 1 || N < 1 || d < 1) throw ConfigError("build_w1_contextual: bad configuration");
  std::vector<ContextWeights> simplex = measures::enumerate_weights(C, N);
  if (simplex.empty())
    throw ConfigError("build_w1_contextual: contextualized simplex is empty (C < N)");
  std::size_t pair_count = simplex.size() * simplex.size();
  if (pair_count > enumeration_budget())
    throw CapacityError("build_w1_contextual: weight-pair count exceeds the enumeration budget");

  const int in_dim = 2 * N * (d + 1);
  const int xoff = 0, woff = N * d, yoff = N * (d + 1), voff = N * (d + 1) + N * d;

  // Gate for one target pair: threshold(||w - wt||_1 + ||v - vt||_1).
  auto gate_net = [&](const ContextWeights& wt, const ContextWeights& vt) {
    Affine shift(SparseMatrix(2 * N, in_dim), Vec(2 * N, 0.0));
    for (int i = 0; i < N; ++i) {
      shift.W.add(i, woff + i, 1.0);
      shift.c[i] = -static_cast<double>(wt.num[i]) / C;
      shift.W.add(N + i, voff + i, 1.0);
      shift.c[N + i] = -static_cast<double>(vt.num[i]) / C;
    }
    CompiledNet norms =
        netbuilder::stack({netbuilder::build_l1_norm(N), netbuilder::build_l1_norm(N)});
    Affine sum(SparseMatrix(1, 2), Vec(1, 0.0));
    sum.W.add(0, 0, 1.0);
    sum.W.add(0, 1, 1.0);
    CompiledNet s = netbuilder::post_affine(netbuilder::pre_affine(std::move(norms), shift), sum);
    return netbuilder::compose(netbuilder::build_threshold(C), s);
  };

  // Atom selector for the fixed-weight nets: [vec(X) | vec(Y)].
  Affine atoms_only(SparseMatrix(2 * N * d, in_dim), Vec(2 * N * d, 0.0));
  for (int i = 0; i < N * d; ++i) {
    atoms_only.W.add(i, xoff + i, 1.0);
    atoms_only.W.add(N * d + i, yoff + i, 1.0);
  }

  std::vector<CompiledNet> branches;
  for (const auto& wt : simplex) {
    for (const auto& vt : simplex) {
      CompiledNet gate = gate_net(wt, vt);
      CompiledNet w1 =
          netbuilder::pre_affine(build_w1_fixed_weights(wt, vt, d), atoms_only);
      w1.role.clear();
      CompiledNet pair = netbuilder::fanout({std::move(gate), std::move(w1)});
      branches.push_back(netbuilder::compose(netbuilder::build_mult(1), pair));
    }
  }
  CompiledNet gated = netbuilder::fanout(branches);
  Affine total(SparseMatrix(1, static_cast<int>(branches.size())),
               Vec(1, 0.0));
  for (std::size_t i = 0; i < branches.size(); ++i) total.W.add(0, static_cast<int>(i), 1.0);
  CompiledNet net = netbuilder::post_affine(std::move(gated), total);
  net.role = "w1_contextual";
  net.tags = {{"C", C}, {"N", N}, {"d", d}};
  return net;
}

}  // namespace picnet::w1net
