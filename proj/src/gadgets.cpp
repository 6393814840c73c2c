// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/netbuilder.hpp"

namespace picnet::netbuilder {

namespace {

// Builds a net as an alternating affine/activation sequence.
class NetAssembler {
 public:
  explicit NetAssembler(int input_dim) : input_dim_(input_dim) {
    affines_.push_back(Affine::identity(input_dim));
  }

  void then_affine(Affine a) {
    if (a.cols() != affines_.back().rows()) throw ConfigError("NetAssembler: affine mismatch");
    affines_.back() = affine_compose(a, affines_.back());
  }

  void then_act(std::vector<ActivationParams> act) {
    if (static_cast<int>(act.size()) != affines_.back().rows())
      throw ConfigError("NetAssembler: activation layer size mismatch");
    acts_.push_back(std::move(act));
    affines_.push_back(Affine::identity(static_cast<int>(acts_.back().size())));
  }

  CompiledNet finish() {
    CompiledNet net;
    net.input_dim = input_dim_;
    net.input_affine = affines_[0];
    for (std::size_t i = 0; i < acts_.size(); ++i)
      net.stages.push_back({acts_[i], affines_[i + 1]});
    return net;
  }

 private:
  int input_dim_;
  std::vector<Affine> affines_;
  std::vector<std::vector<ActivationParams>> acts_;
};

Affine single_row(int cols, const std::vector<std::pair<int, double>>& entries, double bias = 0) {
  Affine a(SparseMatrix(1, cols), Vec(1, bias));
  for (const auto& [c, v] : entries) a.W.add(0, c, v);
  return a;
}

std::vector<ActivationParams> acts(int n, ActivationParams a) {
  return std::vector<ActivationParams>(n, a);
}

// Componentwise product of adjacent pairs with an odd element carried
// through; one ReQU stage per call.
void product_level(NetAssembler& asm_, int k) {
  int pairs = k / 2, rem = k % 2;
  Affine pre(SparseMatrix(6 * pairs + rem, k), Vec(6 * pairs + rem, 0.0));
  for (int t = 0; t < pairs; ++t) {
    int a = 2 * t, b = 2 * t + 1, r = 6 * t;
    pre.W.add(r + 0, a, 1);
    pre.W.add(r + 0, b, 1);
    pre.W.add(r + 1, a, -1);
    pre.W.add(r + 1, b, -1);
    pre.W.add(r + 2, a, 1);
    pre.W.add(r + 3, a, -1);
    pre.W.add(r + 4, b, 1);
    pre.W.add(r + 5, b, -1);
  }
  if (rem) pre.W.add(6 * pairs, k - 1, 1);
  asm_.then_affine(pre);

  auto layer = acts(6 * pairs, ActivationParams::requ());
  if (rem) layer.push_back(ActivationParams::identity());
  asm_.then_act(layer);

  // x*y = ((x+y)^2 - x^2 - y^2) / 2 with s^2 = ReQU(s) + ReQU(-s)
  Affine post(SparseMatrix(pairs + rem, 6 * pairs + rem), Vec(pairs + rem, 0.0));
  for (int t = 0; t < pairs; ++t) {
    int r = 6 * t;
    post.W.add(t, r + 0, 0.5);
    post.W.add(t, r + 1, 0.5);
    post.W.add(t, r + 2, -0.5);
    post.W.add(t, r + 3, -0.5);
    post.W.add(t, r + 4, -0.5);
    post.W.add(t, r + 5, -0.5);
  }
  if (rem) post.W.add(pairs, 6 * pairs, 1);
  asm_.then_affine(post);
}

}  // namespace

CompiledNet build_abs() {
  NetAssembler a(1);
  Affine pre(SparseMatrix(2, 1), Vec(2, 0.0));
  pre.W.add(0, 0, 1);
  pre.W.add(1, 0, -1);
  a.then_affine(pre);
  a.then_act(acts(2, ActivationParams::relu()));
  a.then_affine(single_row(2, {{0, 1}, {1, 1}}));
  return a.finish();
}

CompiledNet build_l1_norm(int F) {
  if (F < 1) throw ConfigError("build_l1_norm: F must be positive");
  if (F == 1) return build_abs();
  // One coordinate is rectified per stage while the rest ride along on
  // identity neurons, together with the running partial sum.
  NetAssembler a(F);
  Affine first(SparseMatrix(F + 1, F), Vec(F + 1, 0.0));
  first.W.add(0, 0, 1);
  first.W.add(1, 0, -1);
  for (int k = 1; k < F; ++k) first.W.add(1 + k, k, 1);
  a.then_affine(first);
  for (int i = 1; i <= F; ++i) {
    int pending = F - i;           // coordinates still untouched
    int have_sum = i >= 2 ? 1 : 0;  // running sum present from stage 2 on
    auto layer = acts(2, ActivationParams::relu());
    auto ids = acts(pending + have_sum, ActivationParams::identity());
    layer.insert(layer.end(), ids.begin(), ids.end());
    a.then_act(layer);

    int in_dim = 2 + pending + have_sum;
    int sum_col = 2 + pending;  // column of s_{i-1}, when present
    if (i == F) {
      Affine fin(SparseMatrix(1, in_dim), Vec(1, 0.0));
      fin.W.add(0, 0, 1);
      fin.W.add(0, 1, 1);
      if (have_sum) fin.W.add(0, sum_col, 1);
      a.then_affine(fin);
    } else {
      // -> [x_{i+1}, -x_{i+1}, remaining, s_i]
      int out_dim = 2 + (pending - 1) + 1;
      Affine mid(SparseMatrix(out_dim, in_dim), Vec(out_dim, 0.0));
      mid.W.add(0, 2, 1);
      mid.W.add(1, 2, -1);
      for (int k = 1; k < pending; ++k) mid.W.add(1 + k, 2 + k, 1);
      mid.W.add(out_dim - 1, 0, 1);
      mid.W.add(out_dim - 1, 1, 1);
      if (have_sum) mid.W.add(out_dim - 1, sum_col, 1);
      a.then_affine(mid);
    }
  }
  return a.finish();
}

CompiledNet build_sq_l2_norm(int F) {
  if (F < 1) throw ConfigError("build_sq_l2_norm: F must be positive");
  NetAssembler a(F);
  Affine pre(SparseMatrix(2 * F, F), Vec(2 * F, 0.0));
  for (int i = 0; i < F; ++i) {
    pre.W.add(2 * i, i, 1);
    pre.W.add(2 * i + 1, i, -1);
  }
  a.then_affine(pre);
  a.then_act(acts(2 * F, ActivationParams::requ()));
  Affine post(SparseMatrix(1, 2 * F), Vec(1, 0.0));
  for (int i = 0; i < 2 * F; ++i) post.W.add(0, i, 1);
  a.then_affine(post);
  return a.finish();
}

CompiledNet build_mult(int m) {
  if (m < 1) throw ConfigError("build_mult: m must be positive");
  NetAssembler a(2 * m);
  Affine pre(SparseMatrix(6 * m, 2 * m), Vec(6 * m, 0.0));
  for (int i = 0; i < m; ++i) {
    int x = i, y = m + i, r = 6 * i;
    pre.W.add(r + 0, x, 1);
    pre.W.add(r + 0, y, 1);
    pre.W.add(r + 1, x, -1);
    pre.W.add(r + 1, y, -1);
    pre.W.add(r + 2, x, 1);
    pre.W.add(r + 3, x, -1);
    pre.W.add(r + 4, y, 1);
    pre.W.add(r + 5, y, -1);
  }
  a.then_affine(pre);
  a.then_act(acts(6 * m, ActivationParams::requ()));
  Affine post(SparseMatrix(m, 6 * m), Vec(m, 0.0));
  for (int i = 0; i < m; ++i) {
    int r = 6 * i;
    post.W.add(i, r + 0, 0.5);
    post.W.add(i, r + 1, 0.5);
    post.W.add(i, r + 2, -0.5);
    post.W.add(i, r + 3, -0.5);
    post.W.add(i, r + 4, -0.5);
    post.W.add(i, r + 5, -0.5);
  }
  a.then_affine(post);
  return a.finish();
}

CompiledNet build_min(int K) {
  if (K < 1) throw ConfigError("build_min: K must be positive");
  NetAssembler a(K);
  int k = K;
  // min(a,b) = (a + b - |a-b|)/2, one level per halving; adjacent pairing
  // with the trailing odd element carried, fixed for determinism.
  while (k > 1) {
    int pairs = k / 2, rem = k % 2;
    Affine pre(SparseMatrix(3 * pairs + rem, k), Vec(3 * pairs + rem, 0.0));
    for (int t = 0; t < pairs; ++t) {
      int x = 2 * t, y = 2 * t + 1, r = 3 * t;
      pre.W.add(r + 0, x, 1);
      pre.W.add(r + 0, y, -1);
      pre.W.add(r + 1, x, -1);
      pre.W.add(r + 1, y, 1);
      pre.W.add(r + 2, x, 1);
      pre.W.add(r + 2, y, 1);
    }
    if (rem) pre.W.add(3 * pairs, k - 1, 1);
    a.then_affine(pre);

    auto layer = acts(0, ActivationParams::relu());
    for (int t = 0; t < pairs; ++t) {
      layer.push_back(ActivationParams::relu());
      layer.push_back(ActivationParams::relu());
      layer.push_back(ActivationParams::identity());
    }
    if (rem) layer.push_back(ActivationParams::identity());
    a.then_act(layer);

    Affine post(SparseMatrix(pairs + rem, 3 * pairs + rem), Vec(pairs + rem, 0.0));
    for (int t = 0; t < pairs; ++t) {
      int r = 3 * t;
      post.W.add(t, r + 0, -0.5);
      post.W.add(t, r + 1, -0.5);
      post.W.add(t, r + 2, 0.5);
    }
    if (rem) post.W.add(pairs, 3 * pairs, 1);
    a.then_affine(post);
    k = pairs + rem;
  }
  return a.finish();
}

CompiledNet build_inner_product(int n) {
  if (n < 1) throw ConfigError("build_inner_product: n must be positive");
  CompiledNet net = build_mult(n);
  Affine sum(SparseMatrix(1, n), Vec(1, 0.0));
  for (int i = 0; i < n; ++i) sum.W.add(0, i, 1);
  return post_affine(std::move(net), sum);
}

CompiledNet build_bump(double delta_star, double delta, int d) {
  if (!(0 < delta_star && delta_star < delta))
    throw ConfigError("build_bump: need 0 < delta_star < delta");
  if (d < 1) throw ConfigError("build_bump: d must be positive");
  // Scalar trapezoid: 1 on [-ds,ds], 0 outside [-dl,dl], linear between.
  NetAssembler a(d);
  Affine pre(SparseMatrix(2 * d, d), Vec(2 * d, 0.0));
  for (int i = 0; i < d; ++i) {
    pre.W.add(2 * i, i, 1);
    pre.W.add(2 * i + 1, i, -1);
  }
  a.then_affine(pre);
  a.then_act(acts(2 * d, ActivationParams::relu()));
  // (phi applied per coordinate) = [ReLU(dl - |t|) - ReLU(ds - |t|)] / (dl - ds)
  Affine ramps(SparseMatrix(2 * d, 2 * d), Vec(2 * d, 0.0));
  for (int i = 0; i < d; ++i) {
    ramps.W.add(2 * i, 2 * i, -1);
    ramps.W.add(2 * i, 2 * i + 1, -1);
    ramps.c[2 * i] = delta;
    ramps.W.add(2 * i + 1, 2 * i, -1);
    ramps.W.add(2 * i + 1, 2 * i + 1, -1);
    ramps.c[2 * i + 1] = delta_star;
  }
  a.then_affine(ramps);
  a.then_act(acts(2 * d, ActivationParams::relu()));
  double inv = 1.0 / (delta - delta_star);
  Affine combine(SparseMatrix(d, 2 * d), Vec(d, 0.0));
  for (int i = 0; i < d; ++i) {
    combine.W.add(i, 2 * i, inv);
    combine.W.add(i, 2 * i + 1, -inv);
  }
  a.then_affine(combine);
  // product over the d coordinates
  int k = d;
  while (k > 1) {
    product_level(a, k);
    k = k / 2 + k % 2;
  }
  return a.finish();
}

CompiledNet build_threshold(int C) {
  if (C < 1) throw ConfigError("build_threshold: C must be positive");
  double step = 1.0 / (2.0 * C);
  NetAssembler a(1);
  Affine pre(SparseMatrix(3, 1), Vec(3, 0.0));
  pre.W.add(0, 0, 1);
  pre.W.add(1, 0, 1);
  pre.c[1] = -step;
  pre.c[2] = 1.0;  // constant channel
  a.then_affine(pre);
  auto layer = acts(2, ActivationParams::relu());
  layer.push_back(ActivationParams::identity());
  a.then_act(layer);
  a.then_affine(single_row(3, {{0, -2.0 * C}, {1, 2.0 * C}, {2, 1.0}}));
  return a.finish();
}

}  // namespace picnet::netbuilder
