// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef PICNET_MEASURES_HPP
#define PICNET_MEASURES_HPP

#include <string>
#include <vector>

#include "picnet/common.hpp"

namespace picnet::measures {

// Quantized weight vector on the contextualized simplex: N positive
// numerators over a context window C, summing to C exactly.  Stored as
// integers so membership tests never touch floating point.
struct ContextWeights {
  int C = 1;
  std::vector<int> num;  // w_n = num[n] / C

  ContextWeights() = default;
  ContextWeights(int window, std::vector<int> numerators);

  int tokens() const { return static_cast<int>(num.size()); }
  Vec as_doubles() const;
  bool operator==(const ContextWeights& o) const { return C == o.C && num == o.num; }
  bool operator<(const ContextWeights& o) const { return num < o.num; }
};

// Discrete probability measure with distinct atoms and quantized weights.
struct PICMeasure {
  int d = 1;
  std::vector<Vec> atoms;  // N points in R^d
  ContextWeights weights;

  PICMeasure() = default;
  PICMeasure(std::vector<Vec> atoms_in, ContextWeights w);

  int tokens() const { return static_cast<int>(atoms.size()); }
  int C() const { return weights.C; }

  std::string to_json() const;
  static PICMeasure from_json(const std::string& text);
};

struct ContextQuery {
  PICMeasure context;
  Vec query;

  ContextQuery() = default;
  ContextQuery(PICMeasure mu, Vec x);
};

// Finite signed measure; coincident atoms are merged and zero masses dropped
// at construction, so the atom list is always distinct.
struct SignedDiscreteMeasure {
  std::vector<Vec> atoms;
  Vec masses;

  SignedDiscreteMeasure() = default;
  SignedDiscreteMeasure(std::vector<Vec> atoms_in, Vec masses_in);
};

// Uniform measure on M output atoms (repeats allowed).
struct OutputMeasure {
  int dim = 1;
  std::vector<Vec> atoms;

  OutputMeasure() = default;
  OutputMeasure(int D, std::vector<Vec> atoms_in);
  int size() const { return static_cast<int>(atoms.size()); }
};

// All weight vectors in the contextualized simplex, lexicographically sorted.
// Empty when C < N (no positive quantized vector sums to one).
std::vector<ContextWeights> enumerate_weights(int C, int N);

// Exact W1 with l1 ground cost, via uniform C-expansion and an assignment
// solve.  Both measures must share C, N and d.
double w1_oracle(const PICMeasure& a, const PICMeasure& b);

// W1 between two uniform measures given as atom lists (repeats allowed).
double w1_uniform_atoms(const std::vector<Vec>& A, const std::vector<Vec>& B);
double w1_output(const OutputMeasure& a, const OutputMeasure& b);

// min over all row permutations of ||PI X - Y||_F; brute force over N!.
double quotient_dist(const std::vector<Vec>& X, const std::vector<Vec>& Y);

// Dual norm sup { sum m_i f(z_i) : |f| <= a, |f_i - f_j| <= b ||z_i - z_j||_1,
// a + b <= 1 }, solved as a linear program.
double kr_norm(const SignedDiscreteMeasure& m);

// W1 between contexts plus l1 between queries.
double pair_metric(const ContextQuery& p, const ContextQuery& q);

// Signed difference a - b of two uniform output measures.
SignedDiscreteMeasure signed_difference(const OutputMeasure& a, const OutputMeasure& b);

// Difference f(p) - sum_k phi_k nu_k against a blend of output measures.
SignedDiscreteMeasure signed_mixture_difference(const OutputMeasure& a,
                                                const std::vector<double>& coeffs,
                                                const std::vector<OutputMeasure>& parts);

}  // namespace picnet::measures

#endif  // PICNET_MEASURES_HPP
