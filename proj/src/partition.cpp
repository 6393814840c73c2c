// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/partition.hpp"

#include <algorithm>
#include <cmath>

#include "picnet/w1net.hpp"

namespace picnet::partition {

using measures::pair_metric;
using netbuilder::CompiledNet;

ModulusOfContinuity::ModulusOfContinuity(std::function<double(double)> w,
                                         std::function<double(double)> w_inv, double grid_max)
    : omega(std::move(w)), omega_inv(std::move(w_inv)) {
  if (omega(0.0) != 0.0) throw ConfigError("ModulusOfContinuity: omega(0) must be 0");
  double prev = 0.0;
  for (int i = 1; i <= 64; ++i) {
    double t = grid_max * i / 64.0;
    double v = omega(t);
    if (v + 1e-12 < prev) throw ConfigError("ModulusOfContinuity: omega must be nondecreasing");
    prev = v;
  }
}

ModulusOfContinuity ModulusOfContinuity::linear(double L) {
  if (L <= 0) throw ConfigError("ModulusOfContinuity: L must be positive");
  return ModulusOfContinuity([L](double t) { return L * t; }, [L](double s) { return s / L; });
}

Packing greedy_packing(const std::vector<ContextQuery>& samples, double delta,
                       double delta_star) {
  if (samples.empty()) throw ConfigError("greedy_packing: empty sample list");
  if (!(0 < delta_star && delta_star < delta))
    throw ConfigError("greedy_packing: need 0 < delta_star < delta");

  Packing p;
  p.delta = delta;
  p.delta_star = delta_star;
  p.landmarks.push_back(samples[0]);

  std::vector<double> nearest(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    nearest[i] = pair_metric(samples[i], samples[0]);
  for (;;) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
      if (nearest[i] > nearest[far]) far = i;
    if (nearest[far] < delta) break;
    p.landmarks.push_back(samples[far]);
    for (std::size_t i = 0; i < samples.size(); ++i)
      nearest[i] = std::min(nearest[i], pair_metric(samples[i], samples[far]));
  }
  return p;
}

CellAssignment assign_cells(const Packing& packing, const std::vector<ContextQuery>& samples) {
  CellAssignment out;
  out.label.reserve(samples.size());
  for (const auto& s : samples) {
    int label = kTrifling;
    for (int k = 0; k < packing.size(); ++k) {
      double dist = pair_metric(s, packing.landmarks[k]);
      if (dist < packing.delta) {
        if (dist < packing.delta_star) label = k;
        break;  // inside an earlier delta-ball: excluded from all later cells
      }
    }
    out.label.push_back(label);
  }
  return out;
}

const OutputMeasure& PwcApproximator::eval(const ContextQuery& p) const {
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k < packing.size(); ++k) {
    double dist = pair_metric(p, packing.landmarks[k]);
    if (dist < packing.delta) return values[k];  // first delta-cell wins
    if (dist < best_dist) {
      best_dist = dist;
      best = k;
    }
  }
  return values[best];  // boundary fallback: nearest landmark
}

PwcApproximator pwc_approximator(const Packing& packing, const TargetFunction& f) {
  PwcApproximator out;
  out.packing = packing;
  for (const auto& lm : packing.landmarks) out.values.push_back(f.eval(lm));
  return out;
}

Vec pack_query(const ContextQuery& p) {
  Vec x;
  for (const auto& atom : p.context.atoms) x.insert(x.end(), atom.begin(), atom.end());
  for (int k : p.context.weights.num)
    x.push_back(static_cast<double>(k) / p.context.C());
  x.insert(x.end(), p.query.begin(), p.query.end());
  return x;
}

namespace {

// Gate for one landmark: bump(W1(mu, mu_k) + ||x - x_k||_1), a function of
// the packed [vec(X) | w | x] input.  The cells are defined through the
// pair metric, so the query summand is the l1 distance.
CompiledNet landmark_gate(const Packing& packing, int k) {
  const auto& lm = packing.landmarks[k];
  const int N = lm.context.tokens();
  const int d = lm.context.d;
  const int C = lm.context.C();
  const int in_dim = N * (d + 1) + d;
  const int xoff = N * (d + 1);

  // (X, w, x) -> (X, w, X_k, w_k) for the contextual W1 net
  const int ctx_dim = 2 * N * (d + 1);
  Affine embed(SparseMatrix(ctx_dim, in_dim), Vec(ctx_dim, 0.0));
  for (int i = 0; i < N * (d + 1); ++i) embed.W.add(i, i, 1.0);
  for (int n = 0; n < N; ++n)
    for (int c = 0; c < d; ++c) embed.c[N * (d + 1) + n * d + c] = lm.context.atoms[n][c];
  for (int n = 0; n < N; ++n)
    embed.c[N * (d + 1) + N * d + n] = static_cast<double>(lm.context.weights.num[n]) / C;
  CompiledNet w1 = netbuilder::pre_affine(w1net::build_w1_contextual(C, N, d), embed);
  w1.role.clear();

  // x - x_k
  Affine shift(SparseMatrix(d, in_dim), Vec(d, 0.0));
  for (int c = 0; c < d; ++c) {
    shift.W.add(c, xoff + c, 1.0);
    shift.c[c] = -lm.query[c];
  }
  CompiledNet qdist = netbuilder::pre_affine(netbuilder::build_l1_norm(d), shift);

  CompiledNet both = netbuilder::fanout({std::move(w1), std::move(qdist)});
  Affine sum(SparseMatrix(1, 2), Vec(1, 0.0));
  sum.W.add(0, 0, 1.0);
  sum.W.add(0, 1, 1.0);
  CompiledNet dist = netbuilder::post_affine(std::move(both), sum);
  return netbuilder::compose(netbuilder::build_bump(packing.delta_star, packing.delta, 1),
                             dist);
}

// Appends one stage in place: the pre map merges into the net's last affine.
void append_stage(CompiledNet& net, Affine pre, std::vector<netbuilder::ActivationParams> act,
                  Affine post) {
  Affine& last = net.stages.empty() ? net.input_affine : net.stages.back().affine;
  last = affine_compose(pre, last);
  net.stages.push_back({std::move(act), std::move(post)});
}

// One exact product of two state entries (or affine images of them), with
// every other state entry carried through identity neurons.  The product
// slot replaces `keep_a`; entries listed in `drop` are removed.
struct ProductSpec {
  std::vector<std::pair<int, double>> a, b;  // sparse rows of the two factors
  double a_bias = 0, b_bias = 0;
};

void append_product_stage(CompiledNet& net, int dim, int out_slot, const ProductSpec& spec,
                          const std::vector<int>& carry) {
  using netbuilder::ActivationParams;
  const int rows = static_cast<int>(carry.size()) + 6;
  Affine pre(SparseMatrix(rows, dim), Vec(rows, 0.0));
  std::vector<ActivationParams> act;
  int r = 0;
  auto add_row = [&](const std::vector<std::pair<int, double>>& entries, double scale,
                     double bias) {
    for (const auto& [c, v] : entries) pre.W.add(r, c, scale * v);
    pre.c[r] = scale * bias;
  };
  std::vector<int> carry_rows;
  for (int c : carry) {
    pre.W.add(r, c, 1.0);
    act.push_back(ActivationParams::identity());
    carry_rows.push_back(r);
    ++r;
  }
  // polarization rows: (a+b, -a-b, a, -a, b, -b), squared by ReQU
  int m0 = r;
  add_row(spec.a, 1.0, spec.a_bias);
  for (const auto& [c, v] : spec.b) pre.W.add(r, c, v);
  pre.c[r] += spec.b_bias;
  ++r;
  add_row(spec.a, -1.0, spec.a_bias);
  for (const auto& [c, v] : spec.b) pre.W.add(r, c, -v);
  pre.c[r] -= spec.b_bias;
  ++r;
  add_row(spec.a, 1.0, spec.a_bias);
  ++r;
  add_row(spec.a, -1.0, spec.a_bias);
  ++r;
  add_row(spec.b, 1.0, spec.b_bias);
  ++r;
  add_row(spec.b, -1.0, spec.b_bias);
  ++r;
  for (int i = 0; i < 6; ++i) act.push_back(ActivationParams::requ());

  const int out_dim = static_cast<int>(carry.size()) + 1;
  Affine post(SparseMatrix(out_dim, rows), Vec(out_dim, 0.0));
  int out_r = 0;
  for (std::size_t i = 0; i < carry_rows.size(); ++i) {
    if (out_r == out_slot) ++out_r;
    post.W.add(out_r, carry_rows[i], 1.0);
    ++out_r;
  }
  post.W.add(out_slot, m0 + 0, 0.5);
  post.W.add(out_slot, m0 + 1, 0.5);
  post.W.add(out_slot, m0 + 2, -0.5);
  post.W.add(out_slot, m0 + 3, -0.5);
  post.W.add(out_slot, m0 + 4, -0.5);
  post.W.add(out_slot, m0 + 5, -0.5);
  append_stage(net, std::move(pre), std::move(act), std::move(post));
}

// Joint net computing all K retracted-cell indicators:
//   Phi_k = gate_k * prod_{j<k} (1 - Phi_j),
// realized with a running product R_k = prod_{j<=k} (1 - Phi_j).
CompiledNet joint_indicator_net(const Packing& packing) {
  const int K = packing.size();
  std::vector<CompiledNet> gates;
  for (int k = 0; k < K; ++k) gates.push_back(landmark_gate(packing, k));
  CompiledNet net = netbuilder::fanout(gates);
  if (K == 1) return net;

  // Append the constant channel R_0 = 1: state (g_0..g_{K-1}, R_0).
  {
    Affine& last = net.stages.back().affine;
    SparseMatrix W2(last.rows() + 1, last.cols());
    W2.add_block(0, 0, last.W);
    last.W = std::move(W2);
    last.c.push_back(1.0);
  }

  for (int k = 0; k < K; ++k) {
    // state: [Phi_0..Phi_{k-1}, g_k..g_{K-1}, R]; width K+1 throughout
    const int dim = K + 1;
    std::vector<int> carry;
    for (int i = 0; i < dim; ++i)
      if (i != k && (k + 1 < K || i != dim - 1)) carry.push_back(i);
    ProductSpec phi;  // Phi_k = g_k * R_{k-1}
    phi.a = {{k, 1.0}};
    phi.b = {{dim - 1, 1.0}};
    append_product_stage(net, dim, k, phi, carry);
    if (k + 1 == K) break;
    // R_k = R_{k-1} * (1 - Phi_k)
    std::vector<int> carry2;
    for (int i = 0; i < dim - 1; ++i) carry2.push_back(i);
    ProductSpec run;
    run.a = {{dim - 1, 1.0}};
    run.b = {{k, -1.0}};
    run.b_bias = 1.0;
    append_product_stage(net, dim, dim - 1, run, carry2);
  }
  return net;
}

}  // namespace

CompiledNet build_indicator_net(const Packing& packing, int k) {
  if (k < 0 || k >= packing.size()) throw ConfigError("build_indicator_net: cell index out of range");
  CompiledNet joint = joint_indicator_net(packing);
  Affine pick(SparseMatrix(1, packing.size()), Vec(1, 0.0));
  pick.W.add(0, k, 1.0);
  return netbuilder::post_affine(std::move(joint), pick);
}

Approximator build_approximator(const Packing& packing, const TargetFunction& f) {
  Approximator out;
  for (const auto& lm : packing.landmarks) out.values.push_back(f.eval(lm));
  out.M = out.values[0].size();
  out.D = out.values[0].dim;
  out.indicators = joint_indicator_net(packing);

  // f_hat = sum_k nu_k Phi_k: a linear read-out of the indicators with the
  // cell values as columns, atoms in canonical (lexicographic) order.
  const int K = packing.size();
  Affine readout(SparseMatrix(out.M * out.D, K), Vec(out.M * out.D, 0.0));
  for (int k = 0; k < K; ++k) {
    std::vector<Vec> atoms = out.values[k].atoms;
    std::sort(atoms.begin(), atoms.end());
    for (int m = 0; m < out.M; ++m)
      for (int c = 0; c < out.D; ++c)
        if (atoms[m][c] != 0.0) readout.W.add(m * out.D + c, k, atoms[m][c]);
  }
  out.net = netbuilder::post_affine(out.indicators, readout);
  out.net.role = "approximator";
  return out;
}

OutputMeasure Approximator::predict(const ContextQuery& p) const {
  Vec flat = net.eval(pack_query(p));
  std::vector<Vec> atoms(M, Vec(D));
  for (int m = 0; m < M; ++m)
    for (int c = 0; c < D; ++c) atoms[m][c] = flat[m * D + c];
  return OutputMeasure(D, std::move(atoms));
}

std::vector<double> Approximator::indicator_values(const ContextQuery& p) const {
  return indicators.eval(pack_query(p));
}

RegionReport region_statistics(const Packing& packing, const std::vector<ContextQuery>& samples,
                               const TargetFunction& f, const Approximator& f_hat,
                               double moment_p, double q, const ModulusOfContinuity& omega) {
  if (moment_p < 1) throw ConfigError("region_statistics: moment order must be >= 1");
  RegionReport rep;
  rep.total = static_cast<int>(samples.size());
  CellAssignment cells = assign_cells(packing, samples);

  std::vector<OutputMeasure> sorted_values;
  for (const auto& v : f_hat.values) {
    std::vector<Vec> atoms = v.atoms;
    std::sort(atoms.begin(), atoms.end());
    sorted_values.emplace_back(v.dim, std::move(atoms));
  }

  double tail_sum = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    OutputMeasure truth = f.eval(samples[i]);
    if (cells.label[i] == kTrifling) {
      ++rep.trifling_count;
      // Inside the trifling region the net emits a (possibly signed) mixture
      // of the cell values; measure the error with the KR norm.
      std::vector<double> phi = f_hat.indicator_values(samples[i]);
      double err = measures::kr_norm(
          measures::signed_mixture_difference(truth, phi, sorted_values));
      tail_sum += std::pow(err, moment_p);
    } else {
      double err = measures::w1_output(truth, f_hat.predict(samples[i]));
      rep.sup_err_approx_region = std::max(rep.sup_err_approx_region, err);
    }
  }
  rep.trifling_fraction = rep.total ? static_cast<double>(rep.trifling_count) / rep.total : 0.0;
  rep.tail_moment_p =
      rep.total ? std::pow(tail_sum / rep.total, 1.0 / moment_p) : 0.0;
  rep.bound_omega_delta = omega.omega(packing.delta);
  double dq = std::pow(packing.delta, q) - std::pow(packing.delta_star, q);
  rep.bound_trifling = packing.size() * dq;
  rep.bound_trifling_noK = dq;
  return rep;
}

}  // namespace picnet::partition
