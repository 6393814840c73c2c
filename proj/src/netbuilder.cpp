// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/netbuilder.hpp"

#include <cassert>
#include <cmath>

namespace picnet::netbuilder {

double activate(const ActivationParams& a, double x) {
  if (x < 0) return a.alpha2 * x;
  if (a.p == 1.0) return a.alpha1 * x;
  if (a.p == 2.0) {
#ifndef NDEBUG
    assert(std::fabs(x) <= 1e6 && "ReQU input out of the conditioned range");
#endif
    return a.alpha1 * x * x;
  }
  return a.alpha1 * std::pow(x, a.p);
}

int CompiledNet::output_dim() const {
  return stages.empty() ? input_affine.rows() : stages.back().affine.rows();
}

int CompiledNet::width() const {
  int w = 0;
  for (const auto& s : stages) w = std::max(w, static_cast<int>(s.act.size()));
  return w;
}

std::size_t CompiledNet::nonzero_params() const {
  auto count_vec = [](const Vec& v) {
    std::size_t n = 0;
    for (double x : v)
      if (x != 0.0) ++n;
    return n;
  };
  std::size_t n = input_affine.W.nnz() + count_vec(input_affine.c);
  for (const auto& s : stages) n += s.affine.W.nnz() + count_vec(s.affine.c);
  return n;
}

Vec CompiledNet::eval(const Vec& x) const {
  if (static_cast<int>(x.size()) != input_dim)
    throw ConfigError("CompiledNet::eval: dimension mismatch");
  Vec v = input_affine.apply(x);
  for (const auto& s : stages) {
    if (v.size() != s.act.size()) throw ConfigError("CompiledNet::eval: corrupt stage");
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = activate(s.act[i], v[i]);
    v = s.affine.apply(v);
  }
  return v;
}

CompiledNet affine_net(Affine a) {
  CompiledNet net;
  net.input_dim = a.cols();
  net.input_affine = std::move(a);
  return net;
}

CompiledNet compose(const CompiledNet& outer, const CompiledNet& inner) {
  if (inner.output_dim() != outer.input_dim)
    throw ConfigError("compose: inner output dimension must match outer input dimension");
  CompiledNet out;
  out.input_dim = inner.input_dim;
  if (inner.stages.empty()) {
    out.input_affine = affine_compose(outer.input_affine, inner.input_affine);
    out.stages = outer.stages;
    return out;
  }
  out.input_affine = inner.input_affine;
  out.stages = inner.stages;
  out.stages.back().affine = affine_compose(outer.input_affine, out.stages.back().affine);
  for (const auto& s : outer.stages) out.stages.push_back(s);
  return out;
}

CompiledNet pad_depth(CompiledNet net, int J) {
  while (net.depth() < J) {
    int D = net.output_dim();
    CompiledNet::Stage s;
    s.act.assign(D, ActivationParams::identity());
    s.affine = Affine::identity(D);
    net.stages.push_back(std::move(s));
  }
  return net;
}

CompiledNet stack(const std::vector<CompiledNet>& nets) {
  if (nets.empty()) throw ConfigError("stack: empty list");
  int J = 0;
  for (const auto& n : nets) J = std::max(J, n.depth());
  std::vector<CompiledNet> padded;
  padded.reserve(nets.size());
  for (const auto& n : nets) padded.push_back(pad_depth(n, J));

  CompiledNet out;
  for (const auto& n : padded) out.input_dim += n.input_dim;
  {
    std::vector<Affine> parts;
    for (const auto& n : padded) parts.push_back(n.input_affine);
    out.input_affine = affine_block_diag(parts);
  }
  for (int j = 0; j < J; ++j) {
    CompiledNet::Stage s;
    std::vector<Affine> parts;
    for (const auto& n : padded) {
      s.act.insert(s.act.end(), n.stages[j].act.begin(), n.stages[j].act.end());
      parts.push_back(n.stages[j].affine);
    }
    s.affine = affine_block_diag(parts);
    out.stages.push_back(std::move(s));
  }
  return out;
}

CompiledNet fanout(const std::vector<CompiledNet>& nets) {
  if (nets.empty()) throw ConfigError("fanout: empty list");
  int dim = nets[0].input_dim;
  for (const auto& n : nets)
    if (n.input_dim != dim) throw ConfigError("fanout: nets must share input dimension");
  return pre_affine(stack(nets), affine_fanout(dim, static_cast<int>(nets.size())));
}

CompiledNet pre_affine(CompiledNet net, const Affine& a) {
  if (a.rows() != net.input_dim) throw ConfigError("pre_affine: dimension mismatch");
  net.input_affine = affine_compose(net.input_affine, a);
  net.input_dim = a.cols();
  return net;
}

CompiledNet post_affine(CompiledNet net, const Affine& a) {
  if (a.cols() != net.output_dim()) throw ConfigError("post_affine: dimension mismatch");
  if (net.stages.empty())
    net.input_affine = affine_compose(a, net.input_affine);
  else
    net.stages.back().affine = affine_compose(a, net.stages.back().affine);
  return net;
}

CompiledNet parallelize(const std::vector<CompiledNet>& nets) {
  if (nets.empty()) throw ConfigError("parallelize: empty list");
  int total_in = 0;
  for (const auto& n : nets) total_in += n.input_dim;

  CompiledNet out;
  out.input_dim = total_in;
  // Running layout: [outputs of finished nets | state of active net | raw pending inputs].
  int done = 0;
  int pending = total_in;
  // pending affine applied before the next activation layer
  Affine carry = Affine::identity(total_in);
  for (const auto& net : nets) {
    pending -= net.input_dim;
    std::vector<Affine> parts;
    parts.push_back(Affine::identity(done));
    parts.push_back(net.input_affine);
    parts.push_back(Affine::identity(pending));
    carry = affine_compose(affine_block_diag(parts), carry);
    for (const auto& st : net.stages) {
      CompiledNet::Stage s;
      s.act.assign(done, ActivationParams::identity());
      s.act.insert(s.act.end(), st.act.begin(), st.act.end());
      s.act.insert(s.act.end(), pending, ActivationParams::identity());
      if (out.stages.empty())
        out.input_affine = carry;
      else
        out.stages.back().affine = carry;
      out.stages.push_back(std::move(s));
      std::vector<Affine> p2;
      p2.push_back(Affine::identity(done));
      p2.push_back(st.affine);
      p2.push_back(Affine::identity(pending));
      carry = affine_block_diag(p2);
    }
    done += net.output_dim();
  }
  if (out.stages.empty())
    out.input_affine = carry;
  else
    out.stages.back().affine = carry;
  return out;
}

CompiledNet canonicalize(CompiledNet net) {
  auto all_zero = [](const Vec& v) {
    for (double x : v)
      if (x != 0.0) return false;
    return true;
  };
  if (net.stages.empty()) {
    if (all_zero(net.input_affine.c)) return net;
    int D = net.output_dim();
    CompiledNet::Stage s;
    s.act.assign(D, ActivationParams::identity());
    s.affine = Affine::identity(D);
    net.stages.push_back(std::move(s));
    return net;
  }
  Affine& last = net.stages.back().affine;
  if (all_zero(last.c)) return net;
  // Feed a constant-one channel through the final activation layer and move
  // the output bias into an extra weight column.
  Affine& prev = net.stages.size() >= 2 ? net.stages[net.stages.size() - 2].affine
                                        : net.input_affine;
  SparseMatrix W2(prev.rows() + 1, prev.cols());
  W2.add_block(0, 0, prev.W);
  prev.W = std::move(W2);
  prev.c.push_back(1.0);
  net.stages.back().act.push_back(ActivationParams::identity());
  SparseMatrix L2(last.rows(), last.cols() + 1);
  L2.add_block(0, 0, last.W);
  for (int r = 0; r < last.rows(); ++r)
    if (last.c[r] != 0.0) L2.add(r, last.cols(), last.c[r]);
  last.W = std::move(L2);
  last.c.assign(last.rows(), 0.0);
  return net;
}

}  // namespace picnet::netbuilder
