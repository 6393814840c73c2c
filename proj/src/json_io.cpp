// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include <json.hpp>

#include "picnet/netbuilder.hpp"
#include "picnet/transformer.hpp"

namespace picnet::netbuilder {

namespace {

void write_vec(std::ostream& os, const Vec& v) {
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << fmt17(v[i]);
  os << "]";
}

void write_dense(std::ostream& os, const SparseMatrix& m) {
  auto d = m.dense();
  os << "[";
  for (std::size_t r = 0; r < d.size(); ++r) {
    if (r) os << ",";
    write_vec(os, d[r]);
  }
  os << "]";
}

void write_acts(std::ostream& os, const std::vector<ActivationParams>& act) {
  os << "[";
  for (std::size_t i = 0; i < act.size(); ++i) {
    os << (i ? ",[" : "[") << fmt17(act[i].alpha1) << "," << fmt17(act[i].p) << ","
       << fmt17(act[i].alpha2) << "]";
  }
  os << "]";
}

bool is_plain_identity(const std::vector<ActivationParams>& act, const Vec& bias) {
  for (const auto& a : act)
    if (a.alpha1 != 1.0 || a.p != 1.0 || a.alpha2 != 1.0) return false;
  for (double b : bias)
    if (b != 0.0) return false;
  return true;
}

}  // namespace

std::string to_json(const CompiledNet& net) {
  CompiledNet canon = canonicalize(net);
  std::ostringstream os;
  os << "{\"layers\":[";
  // Leading layer carries the input weight behind identity activations.
  os << "{\"weight\":";
  write_dense(os, canon.input_affine.W);
  os << ",\"bias\":";
  write_vec(os, Vec(canon.input_dim, 0.0));
  os << ",\"act\":";
  write_acts(os, std::vector<ActivationParams>(canon.input_dim, ActivationParams::identity()));
  os << "}";
  for (int j = 0; j < canon.depth(); ++j) {
    const Vec& bias = j == 0 ? canon.input_affine.c : canon.stages[j - 1].affine.c;
    os << ",{\"weight\":";
    write_dense(os, canon.stages[j].affine.W);
    os << ",\"bias\":";
    write_vec(os, bias);
    os << ",\"act\":";
    write_acts(os, canon.stages[j].act);
    os << "}";
  }
  os << "],\"meta\":{\"depth\":" << canon.depth() << ",\"width\":" << canon.width()
     << ",\"nnz\":" << canon.nonzero_params();
  if (!canon.role.empty()) os << ",\"role\":\"" << canon.role << "\"";
  for (const auto& [k, v] : canon.tags) os << ",\"" << k << "\":" << v;
  os << "}}";
  return os.str();
}

CompiledNet from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("net JSON parse error: ") + e.what());
  }
  try {
    const auto& layers = j.at("layers");
    if (layers.empty()) throw ConfigError("net JSON: no layers");

    struct Parsed {
      SparseMatrix W;
      Vec bias;
      std::vector<ActivationParams> act;
    };
    std::vector<Parsed> ls;
    for (const auto& L : layers) {
      Parsed p;
      auto wd = L.at("weight").get<std::vector<Vec>>();
      int rows = static_cast<int>(wd.size());
      int cols = rows ? static_cast<int>(wd[0].size()) : 0;
      p.W = SparseMatrix(rows, cols);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
          if (wd[r][c] != 0.0) p.W.add(r, c, wd[r][c]);
      p.bias = L.at("bias").get<Vec>();
      for (const auto& t : L.at("act")) {
        if (t.size() != 3) throw ConfigError("net JSON: activation triple expected");
        p.act.push_back({t[0].get<double>(), t[1].get<double>(), t[2].get<double>()});
      }
      ls.push_back(std::move(p));
    }

    CompiledNet net;
    std::size_t start = 0;
    if (is_plain_identity(ls[0].act, ls[0].bias)) {
      net.input_dim = ls[0].W.cols();
      net.input_affine = Affine(ls[0].W, ls.size() > 1 ? ls[1].bias : Vec(ls[0].W.rows(), 0.0));
      start = 1;
    } else {
      net.input_dim = ls[0].W.cols();
      net.input_affine = Affine(SparseMatrix::identity(net.input_dim), ls[0].bias);
      start = 0;
    }
    for (std::size_t k = start; k < ls.size(); ++k) {
      CompiledNet::Stage s;
      s.act = ls[k].act;
      Vec next_bias = k + 1 < ls.size() ? ls[k + 1].bias : Vec(ls[k].W.rows(), 0.0);
      s.affine = Affine(ls[k].W, std::move(next_bias));
      net.stages.push_back(std::move(s));
    }
    if (j.contains("meta")) {
      const auto& meta = j.at("meta");
      if (meta.contains("role")) net.role = meta.at("role").get<std::string>();
      for (const char* key : {"C", "N", "d"})
        if (meta.contains(key)) net.tags[key] = meta.at(key).get<int>();
    }
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("net JSON: ") + e.what());
  }
}

}  // namespace picnet::netbuilder

namespace picnet::transformer {

namespace {

void write_matrix(std::ostream& os, const Matrix& m) {
  os << "[";
  for (int r = 0; r < m.rows; ++r) {
    if (r) os << ",";
    os << "[";
    for (int c = 0; c < m.cols; ++c) os << (c ? "," : "") << fmt17(m.at(r, c));
    os << "]";
  }
  os << "]";
}

Matrix read_matrix(const nlohmann::json& j) {
  auto rows = j.get<std::vector<Vec>>();
  Matrix m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
  return m;
}

}  // namespace

std::string to_json(const TransformerNet& net) {
  std::ostringstream os;
  os << "{\"tokens\":" << net.tokens << ",\"blocks\":[";
  for (std::size_t b = 0; b < net.blocks.size(); ++b) {
    const auto& blk = net.blocks[b];
    if (b) os << ",";
    os << "{\"heads\":[";
    for (std::size_t h = 0; h < blk.heads.size(); ++h) {
      const auto& head = blk.heads[h];
      if (h) os << ",";
      os << "{\"Q\":";
      write_matrix(os, head.Q);
      os << ",\"K\":";
      write_matrix(os, head.K);
      os << ",\"V\":";
      write_matrix(os, head.V);
      os << ",\"lambda\":" << fmt17(head.lambda) << "}";
    }
    os << "],\"bias\":";
    write_matrix(os, blk.bias);
    os << ",\"act\":[";
    for (int t = 0; t < blk.tokens_in; ++t) {
      if (t) os << ",";
      os << "[";
      for (int c = 0; c < blk.width_in; ++c) {
        const auto& a = blk.act[t][c];
        os << (c ? ",[" : "[") << fmt17(a.alpha1) << "," << fmt17(a.p) << "," << fmt17(a.alpha2)
           << "]";
      }
      os << "]";
    }
    os << "],\"active_in\":" << blk.active_in << ",\"active_out\":" << blk.active_out << "}";
  }
  os << "],\"meta\":{\"depth\":" << net.depth() << ",\"width\":" << net.width()
     << ",\"max_heads\":" << net.max_heads() << ",\"nnz\":" << net.nonzero_params() << "}}";
  return os.str();
}

TransformerNet transformer_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("transformer JSON parse error: ") + e.what());
  }
  try {
    TransformerNet net;
    net.tokens = j.at("tokens").get<int>();
    for (const auto& B : j.at("blocks")) {
      TransformerBlock blk;
      blk.bias = read_matrix(B.at("bias"));
      blk.tokens_in = blk.bias.rows;
      blk.width_in = blk.bias.cols;
      blk.active_in = B.at("active_in").get<int>();
      blk.active_out = B.at("active_out").get<int>();
      for (const auto& row : B.at("act")) {
        std::vector<netbuilder::ActivationParams> r;
        for (const auto& t : row)
          r.push_back({t[0].get<double>(), t[1].get<double>(), t[2].get<double>()});
        blk.act.push_back(std::move(r));
      }
      for (const auto& H : B.at("heads")) {
        AttentionHead head;
        head.Q = read_matrix(H.at("Q"));
        head.K = read_matrix(H.at("K"));
        head.V = read_matrix(H.at("V"));
        head.lambda = H.at("lambda").get<double>();
        head.build_index();
        blk.heads.push_back(std::move(head));
      }
      blk.width_out = blk.heads.empty() ? 0 : blk.heads[0].V.rows;
      net.blocks.push_back(std::move(blk));
    }
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("transformer JSON: ") + e.what());
  }
}

}  // namespace picnet::transformer
