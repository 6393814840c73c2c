// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef PICNET_TRANSFORMER_HPP
#define PICNET_TRANSFORMER_HPP

#include <string>
#include <vector>

#include "picnet/measures.hpp"
#include "picnet/netbuilder.hpp"

namespace picnet::transformer {

// Dense row-major matrix, small enough to stay simple.
struct Matrix {
  int rows = 0;
  int cols = 0;
  Vec data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::size_t nnz() const {
    std::size_t n = 0;
    for (double v : data)
      if (v != 0.0) ++n;
    return n;
  }
};

struct AttentionHead {
  Matrix Q;  // k x token_width
  Matrix K;  // k x token_width
  Matrix V;  // value blocks, one per attended position, laid side by side
  double lambda = 1.0;

  // Nonzero entries of V, indexed once after construction; converted nets
  // are extremely sparse and block evaluation walks this list.
  struct Entry {
    int r, c;
    double v;
  };
  std::vector<Entry> nz;
  bool indexed = false;
  void build_index();
};

// Softmax-reweighted measure semantics of a single head: the head maps the
// context (X, w) and query x to the measure
//   sum_n  w_n softmax_n(lambda <Qx, K X_n>/sqrt(d))  delta_{V X_n}.
// The softmax is normalized against the input weights so the output masses
// form a probability vector whenever the inputs do.
struct WeightedAtoms {
  std::vector<Vec> atoms;
  Vec masses;
};
WeightedAtoms attention_eval(const AttentionHead& head, const Vec& x,
                             const std::vector<Vec>& tokens, const Vec& weights);

// One transformer block: activation and bias on the token matrix, then the
// multi-head attention whose stacked head outputs form the next token matrix.
// Head h consumes the whole activated matrix Z (tokens_in x width_in) and
// emits one token: sum_m p_m V[:, m-block] Z_m with p the softmax scores.
// Scores use the first token as query; converted nets carry zero Q and K, so
// the scores are identically zero there and the softmax is uniform.
struct TransformerBlock {
  int tokens_in = 0;
  int width_in = 0;
  int width_out = 0;
  int active_in = 0;   // flat dims before zero-padding
  int active_out = 0;
  std::vector<AttentionHead> heads;
  Matrix bias;                                          // tokens_in x width_in
  std::vector<std::vector<netbuilder::ActivationParams>> act;  // same shape
};

struct TransformerNet {
  int tokens = 0;
  std::vector<TransformerBlock> blocks;

  int depth() const { return static_cast<int>(blocks.size()) - 1; }
  int width() const;               // largest unpadded interior dimension
  int max_heads() const;
  std::size_t nonzero_params() const;
  int input_dim() const { return blocks.empty() ? 0 : blocks.front().active_in; }
  int output_dim() const { return blocks.empty() ? 0 : blocks.back().active_out; }
};

// Token-mixing attention fragment of a weight matrix B (rows x cols): `rows`
// heads over `cols` input tokens of width `token_width`, zero queries and
// keys, values cols * B[h,t] * I.  The stacked head outputs equal B Z for
// every token matrix Z.
std::vector<AttentionHead> build_matmul_heads(const Matrix& B, int token_width = 1);

// Evaluates the stacked heads of a block fragment on a token matrix.
std::vector<Vec> eval_heads(const std::vector<AttentionHead>& heads,
                            const std::vector<Vec>& tokens);

// Re-expresses a compiled net as a transformer with `tokens` attention heads
// per block and identical input-output behaviour.  Layer widths that are not
// multiples of `tokens` are zero-padded and the padding projected away after.
TransformerNet transformerify(const netbuilder::CompiledNet& net, int tokens);

// Flat-vector evaluation matching CompiledNet::eval.
Vec transformer_eval(const TransformerNet& net, const Vec& x);
// Raw token-matrix trace of the final block, before unpadding.
std::vector<Vec> transformer_eval_matrix(const TransformerNet& net, const Vec& x);

std::string to_json(const TransformerNet& net);
TransformerNet transformer_from_json(const std::string& text);

}  // namespace picnet::transformer

#endif  // PICNET_TRANSFORMER_HPP
