// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/transformer.hpp"

#include <algorithm>
#include <cmath>

namespace picnet::transformer {

using netbuilder::ActivationParams;
using netbuilder::CompiledNet;

namespace {

Vec matvec(const Matrix& m, const Vec& x) {
  if (static_cast<int>(x.size()) != m.cols) throw ConfigError("matvec: shape mismatch");
  Vec y(m.rows, 0.0);
  for (int r = 0; r < m.rows; ++r) {
    double s = 0;
    for (int c = 0; c < m.cols; ++c) s += m.at(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Softmax scores of one head against a query vector; empty Q/K mean zero
// scores.  The 1/sqrt(d) scaling uses the token width.
Vec head_scores(const AttentionHead& head, const Vec& query, const std::vector<Vec>& tokens) {
  const int n = static_cast<int>(tokens.size());
  Vec s(n, 0.0);
  if (head.Q.rows > 0 && head.K.rows > 0) {
    Vec qx = matvec(head.Q, query);
    double scale = head.lambda / std::sqrt(static_cast<double>(tokens[0].size()));
    for (int m = 0; m < n; ++m) s[m] = scale * dot(qx, matvec(head.K, tokens[m]));
  }
  return s;
}

Vec softmax(const Vec& s) {
  double mx = *std::max_element(s.begin(), s.end());
  Vec p(s.size());
  double z = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    p[i] = std::exp(s[i] - mx);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

}  // namespace

void AttentionHead::build_index() {
  nz.clear();
  for (int r = 0; r < V.rows; ++r)
    for (int c = 0; c < V.cols; ++c)
      if (V.at(r, c) != 0.0) nz.push_back({r, c, V.at(r, c)});
  indexed = true;
}

WeightedAtoms attention_eval(const AttentionHead& head, const Vec& x,
                             const std::vector<Vec>& tokens, const Vec& weights) {
  if (tokens.empty() || tokens.size() != weights.size())
    throw ConfigError("attention_eval: token/weight count mismatch");
  const int d = static_cast<int>(tokens[0].size());
  if (static_cast<int>(x.size()) != d) throw ConfigError("attention_eval: query width mismatch");
  if (head.V.cols != d) throw ConfigError("attention_eval: value width mismatch");

  Vec s = head_scores(head, x, tokens);
  // weighted softmax: masses w_n e^{s_n} / sum_m w_m e^{s_m}
  double mx = *std::max_element(s.begin(), s.end());
  Vec masses(tokens.size());
  double z = 0;
  for (std::size_t n = 0; n < tokens.size(); ++n) {
    masses[n] = weights[n] * std::exp(s[n] - mx);
    z += masses[n];
  }
  if (z <= 0) throw ConfigError("attention_eval: degenerate weights");
  for (double& m : masses) m /= z;

  WeightedAtoms out;
  out.masses = masses;
  for (const auto& t : tokens) out.atoms.push_back(matvec(head.V, t));
  return out;
}

std::vector<Vec> eval_heads(const std::vector<AttentionHead>& heads,
                            const std::vector<Vec>& tokens) {
  if (tokens.empty()) throw ConfigError("eval_heads: no tokens");
  const int T = static_cast<int>(tokens.size());
  const int w = static_cast<int>(tokens[0].size());
  std::vector<Vec> out;
  out.reserve(heads.size());
  for (const auto& head : heads) {
    if (head.V.cols != T * w) throw ConfigError("eval_heads: value block shape mismatch");
    Vec scores = head_scores(head, tokens[0], tokens);
    Vec p = softmax(scores);
    Vec token(head.V.rows, 0.0);
    if (head.indexed) {
      for (const auto& e : head.nz) token[e.r] += p[e.c / w] * e.v * tokens[e.c / w][e.c % w];
    } else {
      for (int m = 0; m < T; ++m) {
        for (int r = 0; r < head.V.rows; ++r) {
          double s = 0;
          for (int c = 0; c < w; ++c) s += head.V.at(r, m * w + c) * tokens[m][c];
          token[r] += p[m] * s;
        }
      }
    }
    out.push_back(std::move(token));
  }
  return out;
}

std::vector<AttentionHead> build_matmul_heads(const Matrix& B, int token_width) {
  if (B.rows < 1 || B.cols < 1 || token_width < 1)
    throw ConfigError("build_matmul_heads: bad shape");
  std::vector<AttentionHead> heads(B.rows);
  for (int h = 0; h < B.rows; ++h) {
    AttentionHead& head = heads[h];
    head.Q = Matrix(1, token_width);  // zero
    head.K = Matrix(1, token_width);
    head.lambda = 1.0;
    head.V = Matrix(token_width, B.cols * token_width);
    for (int t = 0; t < B.cols; ++t) {
      double v = B.cols * B.at(h, t);  // uniform softmax contributes 1/cols
      if (v == 0.0) continue;
      for (int i = 0; i < token_width; ++i) head.V.at(i, t * token_width + i) = v;
    }
    head.build_index();
  }
  return heads;
}

int TransformerNet::width() const {
  int w = 0;
  for (std::size_t j = 0; j + 1 < blocks.size(); ++j) w = std::max(w, blocks[j].active_out);
  return w;
}

int TransformerNet::max_heads() const {
  int h = 0;
  for (const auto& b : blocks) h = std::max(h, static_cast<int>(b.heads.size()));
  return h;
}

std::size_t TransformerNet::nonzero_params() const {
  std::size_t n = 0;
  for (const auto& b : blocks) {
    n += b.bias.nnz();
    for (const auto& h : b.heads) n += h.Q.nnz() + h.K.nnz() + h.V.nnz();
  }
  return n;
}

TransformerNet transformerify(const CompiledNet& net, int tokens) {
  if (tokens < 1) throw ConfigError("transformerify: token count must be positive");
  CompiledNet canon = netbuilder::canonicalize(net);

  // Strict layer view: (bias, activation, weight) per layer, with an
  // identity-activation layer in front carrying the input weight matrix.
  struct StrictLayer {
    Vec bias;
    std::vector<ActivationParams> act;
    const SparseMatrix* weight;
  };
  std::vector<StrictLayer> layers;
  {
    StrictLayer l0;
    l0.bias.assign(canon.input_dim, 0.0);
    l0.act.assign(canon.input_dim, ActivationParams::identity());
    l0.weight = &canon.input_affine.W;
    layers.push_back(std::move(l0));
    for (std::size_t j = 0; j < canon.stages.size(); ++j) {
      StrictLayer l;
      l.bias = j == 0 ? canon.input_affine.c : canon.stages[j - 1].affine.c;
      l.act = canon.stages[j].act;
      l.weight = &canon.stages[j].affine.W;
      layers.push_back(std::move(l));
    }
  }

  TransformerNet out;
  out.tokens = tokens;
  const int N = tokens;
  auto padded = [N](int dim) { return (dim + N - 1) / N * N; };

  for (const auto& layer : layers) {
    const int din = layer.weight->cols();
    const int dout = layer.weight->rows();
    const int win = padded(din) / N;
    const int wout = padded(dout) / N;

    TransformerBlock block;
    block.tokens_in = N;
    block.width_in = win;
    block.width_out = wout;
    block.active_in = din;
    block.active_out = dout;
    block.bias = Matrix(N, win);
    block.act.assign(N, std::vector<ActivationParams>(win, ActivationParams::identity()));
    for (int i = 0; i < din; ++i) {
      block.bias.at(i / win, i % win) = layer.bias[i];
      block.act[i / win][i % win] = layer.act[i];
    }

    // Head h emits output token h: its value blocks are the h-th row block
    // of the padded weight matrix, scaled by N against the uniform softmax.
    block.heads.assign(N, AttentionHead{});
    for (int h = 0; h < N; ++h) {
      AttentionHead& head = block.heads[h];
      head.Q = Matrix(1, win);
      head.K = Matrix(1, win);
      head.lambda = 1.0;
      head.V = Matrix(wout, N * win);
    }
    for (int r = 0; r < dout; ++r) {
      for (const auto& [c, v] : layer.weight->entries(r)) {
        block.heads[r / wout].V.at(r % wout, c) += N * v;
      }
    }
    for (auto& head : block.heads) head.build_index();
    out.blocks.push_back(std::move(block));
  }
  return out;
}

std::vector<Vec> transformer_eval_matrix(const TransformerNet& net, const Vec& x) {
  if (net.blocks.empty()) throw ConfigError("transformer_eval: empty net");
  if (static_cast<int>(x.size()) != net.input_dim())
    throw ConfigError("transformer_eval: dimension mismatch");
  const int N = net.tokens;
  std::vector<Vec> state(N, Vec(net.blocks.front().width_in, 0.0));
  for (int i = 0; i < net.blocks.front().active_in; ++i)
    state[i / net.blocks.front().width_in][i % net.blocks.front().width_in] = x[i];

  for (const auto& block : net.blocks) {
    if (static_cast<int>(state.size()) != block.tokens_in ||
        static_cast<int>(state[0].size()) != block.width_in)
      throw ConfigError("transformer_eval: block shape mismatch");
    std::vector<Vec> z = state;
    for (int t = 0; t < block.tokens_in; ++t)
      for (int c = 0; c < block.width_in; ++c)
        z[t][c] = netbuilder::activate(block.act[t][c], state[t][c] + block.bias.at(t, c));
    state = eval_heads(block.heads, z);
  }
  return state;
}

Vec transformer_eval(const TransformerNet& net, const Vec& x) {
  std::vector<Vec> m = transformer_eval_matrix(net, x);
  const auto& last = net.blocks.back();
  Vec out(last.active_out);
  for (int i = 0; i < last.active_out; ++i) out[i] = m[i / last.width_out][i % last.width_out];
  return out;
}

}  // namespace picnet::transformer
