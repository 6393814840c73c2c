// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef PICNET_SPARSE_HPP
#define PICNET_SPARSE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "picnet/common.hpp"

namespace picnet {

// Row-major sparse matrix.  Compiled networks are mostly block-diagonal
// stacks of small gadgets, so dense storage would be quadratic waste.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_(rows) {}

  static SparseMatrix identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.row_[i].push_back({i, 1.0});
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void add(int r, int c, double v);
  // Copies `m` into this matrix with its (0,0) entry landing at (r0,c0).
  void add_block(int r0, int c0, const SparseMatrix& m);

  const std::vector<std::pair<int, double>>& entries(int r) const { return row_[r]; }

  Vec apply(const Vec& x) const;
  SparseMatrix times(const SparseMatrix& other) const;  // this * other

  std::size_t nnz() const;
  double get(int r, int c) const;
  std::vector<Vec> dense() const;

  // Drops stored zeros and merges duplicate column entries.
  void compress();

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::vector<std::pair<int, double>>> row_;
};

// y = W x + c
struct Affine {
  SparseMatrix W;
  Vec c;

  Affine() = default;
  Affine(SparseMatrix w, Vec bias) : W(std::move(w)), c(std::move(bias)) {}
  static Affine identity(int n) { return Affine(SparseMatrix::identity(n), Vec(n, 0.0)); }

  int rows() const { return W.rows(); }
  int cols() const { return W.cols(); }
  Vec apply(const Vec& x) const;
};

// second(first(x)) merged into a single affine map.
Affine affine_compose(const Affine& second, const Affine& first);

// Block-diagonal concatenation acting on concatenated inputs.
Affine affine_block_diag(const std::vector<Affine>& parts);

// Stacks copies of the identity so the output is `copies` repetitions of x.
Affine affine_fanout(int dim, int copies);

}  // namespace picnet

#endif  // PICNET_SPARSE_HPP
