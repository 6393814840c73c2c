// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/sparse.hpp"

#include <algorithm>
#include <map>

namespace picnet {

void SparseMatrix::add(int r, int c, double v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw ConfigError("SparseMatrix::add: index out of range");
  if (v != 0.0) row_[r].push_back({c, v});
}

void SparseMatrix::add_block(int r0, int c0, const SparseMatrix& m) {
  if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_)
    throw ConfigError("SparseMatrix::add_block: block out of range");
  for (int r = 0; r < m.rows_; ++r)
    for (const auto& [c, v] : m.row_[r]) row_[r0 + r].push_back({c0 + c, v});
}

Vec SparseMatrix::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw ConfigError("SparseMatrix::apply: dimension mismatch");
  Vec y(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    double s = 0;
    for (const auto& [c, v] : row_[r]) s += v * x[c];
    y[r] = s;
  }
  return y;
}

SparseMatrix SparseMatrix::times(const SparseMatrix& other) const {
  if (cols_ != other.rows_) throw ConfigError("SparseMatrix::times: dimension mismatch");
  SparseMatrix out(rows_, other.cols_);
  std::vector<double> acc(other.cols_, 0.0);
  std::vector<int> touched;
  for (int r = 0; r < rows_; ++r) {
    touched.clear();
    for (const auto& [k, v] : row_[r]) {
      for (const auto& [c, w] : other.row_[k]) {
        if (acc[c] == 0.0) touched.push_back(c);
        acc[c] += v * w;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int c : touched) {
      if (acc[c] != 0.0) out.row_[r].push_back({c, acc[c]});
      acc[c] = 0.0;
    }
  }
  return out;
}

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  std::map<int, double> merged;
  for (int r = 0; r < rows_; ++r) {
    merged.clear();
    for (const auto& [c, v] : row_[r]) merged[c] += v;
    for (const auto& [c, v] : merged) {
      (void)c;
      if (v != 0.0) ++n;
    }
  }
  return n;
}

double SparseMatrix::get(int r, int c) const {
  double s = 0;
  for (const auto& [cc, v] : row_[r])
    if (cc == c) s += v;
  return s;
}

std::vector<Vec> SparseMatrix::dense() const {
  std::vector<Vec> out(rows_, Vec(cols_, 0.0));
  for (int r = 0; r < rows_; ++r)
    for (const auto& [c, v] : row_[r]) out[r][c] += v;
  return out;
}

void SparseMatrix::compress() {
  std::map<int, double> merged;
  for (int r = 0; r < rows_; ++r) {
    merged.clear();
    for (const auto& [c, v] : row_[r]) merged[c] += v;
    row_[r].clear();
    for (const auto& [c, v] : merged)
      if (v != 0.0) row_[r].push_back({c, v});
  }
}

Vec Affine::apply(const Vec& x) const {
  Vec y = W.apply(x);
  if (y.size() != c.size()) throw ConfigError("Affine: bias dimension mismatch");
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += c[i];
  return y;
}

Affine affine_compose(const Affine& second, const Affine& first) {
  Affine out;
  out.W = second.W.times(first.W);
  out.c = second.W.apply(first.c);
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] += second.c[i];
  return out;
}

Affine affine_block_diag(const std::vector<Affine>& parts) {
  int rows = 0, cols = 0;
  for (const auto& p : parts) {
    rows += p.rows();
    cols += p.cols();
  }
  Affine out(SparseMatrix(rows, cols), Vec(rows, 0.0));
  int r0 = 0, c0 = 0;
  for (const auto& p : parts) {
    out.W.add_block(r0, c0, p.W);
    for (int i = 0; i < p.rows(); ++i) out.c[r0 + i] = p.c[i];
    r0 += p.rows();
    c0 += p.cols();
  }
  return out;
}

Affine affine_fanout(int dim, int copies) {
  Affine out(SparseMatrix(dim * copies, dim), Vec(dim * copies, 0.0));
  for (int k = 0; k < copies; ++k)
    for (int i = 0; i < dim; ++i) out.W.add(k * dim + i, i, 1.0);
  return out;
}

}  // namespace picnet
