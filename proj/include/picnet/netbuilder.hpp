// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef PICNET_NETBUILDER_HPP
#define PICNET_NETBUILDER_HPP

#include <map>
#include <string>
#include <vector>

#include "picnet/sparse.hpp"

namespace picnet::netbuilder {

// Trainable activation: x >= 0 -> alpha1 * x^p, x < 0 -> alpha2 * x.
// (1,1,0) is ReLU, (1,1,1) the identity, (1,2,0) ReQU.
struct ActivationParams {
  double alpha1 = 1.0;
  double p = 1.0;
  double alpha2 = 0.0;

  static ActivationParams relu() { return {1.0, 1.0, 0.0}; }
  static ActivationParams identity() { return {1.0, 1.0, 1.0}; }
  static ActivationParams requ() { return {1.0, 2.0, 0.0}; }
};

double activate(const ActivationParams& a, double x);

// Networks are stored as an input affine followed by stages of
// (activation layer, affine).  Written out, that is
//     y = A_J sigma_J( ... A_1 sigma_1( A_0 x + c_0 ) + c_1 ... )
// which matches the iterative representation with the bias of each
// activation layer supplied by the preceding affine.  Depth is the number
// of activation layers and width the largest activation layer.
struct CompiledNet {
  int input_dim = 0;
  Affine input_affine;
  struct Stage {
    std::vector<ActivationParams> act;
    Affine affine;
  };
  std::vector<Stage> stages;
  std::string role;                 // serialization tag, empty for plain gadgets
  std::map<std::string, int> tags;  // extra integer metadata (C, N, d for W1 nets)

  int output_dim() const;
  int depth() const { return static_cast<int>(stages.size()); }
  int width() const;
  std::size_t nonzero_params() const;
  Vec eval(const Vec& x) const;
};

// depth-0 net computing an affine map
CompiledNet affine_net(Affine a);

// ---- gadget compilers ----
CompiledNet build_abs();                      // R -> R, depth 1, width 2
CompiledNet build_l1_norm(int F);             // R^F -> R, depth F
CompiledNet build_sq_l2_norm(int F);          // R^F -> R, depth 1, width 2F
CompiledNet build_mult(int m);                // R^{2m} -> R^m componentwise product
CompiledNet build_min(int K);                 // R^K -> R
CompiledNet build_inner_product(int n);       // R^{2n} -> R
CompiledNet build_bump(double delta_star, double delta, int d);  // R^d -> [0,1]
CompiledNet build_threshold(int C);           // R -> [0,1]

// ---- combinators ----
// eval(compose(g, f), x) == eval(g, eval(f, x)); affines merged at the seam.
CompiledNet compose(const CompiledNet& outer, const CompiledNet& inner);

// Deep parallelization: runs the nets one after another while carrying
// pending inputs and finished outputs through identity-configured neurons.
// Depth <= sum of depths + 1; width within the stated parallelization bound.
CompiledNet parallelize(const std::vector<CompiledNet>& nets);

// Shallow parallelization: pads every net to equal depth with identity
// stages and stacks them side by side on concatenated inputs.
// Depth = max depth, width = sum of padded widths.
CompiledNet stack(const std::vector<CompiledNet>& nets);

// Feeds one copy of the same input to every net, then stacks.
CompiledNet fanout(const std::vector<CompiledNet>& nets);

CompiledNet pre_affine(CompiledNet net, const Affine& a);   // net(a(x))
CompiledNet post_affine(CompiledNet net, const Affine& a);  // a(net(x))

// Appends identity stages until the net has depth J.
CompiledNet pad_depth(CompiledNet net, int J);

// Moves any bias on the final affine into a constant channel so the last
// layer is purely linear, as the serialized form requires.
CompiledNet canonicalize(CompiledNet net);

// ---- serialization ----
// {"layers":[{"weight":[[...]],"bias":[...],"act":[[a1,p,a2],...]}],
//  "meta":{"depth":..,"width":..,"nnz":..}}  (+ "role" when set)
std::string to_json(const CompiledNet& net);
CompiledNet from_json(const std::string& text);

}  // namespace picnet::netbuilder

#endif  // PICNET_NETBUILDER_HPP
