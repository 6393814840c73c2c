// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "picnet/assignment.hpp"
#include "picnet/simplex.hpp"

namespace picnet::measures {

ContextWeights::ContextWeights(int window, std::vector<int> numerators)
    : C(window), num(std::move(numerators)) {
  if (C < 1) throw ConfigError("ContextWeights: C must be positive");
  if (num.empty()) throw ConfigError("ContextWeights: empty weight vector");
  int sum = 0;
  for (int k : num) {
    if (k < 1 || k > C) throw ConfigError("ContextWeights: numerators must lie in [1, C]");
    sum += k;
  }
  if (sum != C) throw ConfigError("ContextWeights: numerators must sum to C");
}

Vec ContextWeights::as_doubles() const {
  Vec w(num.size());
  for (std::size_t i = 0; i < num.size(); ++i) w[i] = static_cast<double>(num[i]) / C;
  return w;
}

PICMeasure::PICMeasure(std::vector<Vec> atoms_in, ContextWeights w)
    : atoms(std::move(atoms_in)), weights(std::move(w)) {
  if (atoms.empty()) throw ConfigError("PICMeasure: no atoms");
  if (static_cast<int>(atoms.size()) != weights.tokens())
    throw ConfigError("PICMeasure: atom/weight count mismatch");
  d = static_cast<int>(atoms[0].size());
  for (const auto& a : atoms)
    if (static_cast<int>(a.size()) != d) throw ConfigError("PICMeasure: ragged atoms");
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (atoms[i] == atoms[j]) throw ConfigError("PICMeasure: duplicate atoms");
}

std::string PICMeasure::to_json() const {
  std::ostringstream os;
  os << "{\"C\":" << weights.C << ",\"N\":" << tokens() << ",\"d\":" << d << ",\"atoms\":[";
  for (int n = 0; n < tokens(); ++n) {
    os << (n ? ",[" : "[");
    for (int i = 0; i < d; ++i) os << (i ? "," : "") << fmt17(atoms[n][i]);
    os << "]";
  }
  os << "],\"weights_num\":[";
  for (int n = 0; n < tokens(); ++n) os << (n ? "," : "") << weights.num[n];
  os << "]}";
  return os.str();
}

PICMeasure PICMeasure::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("PICMeasure: bad JSON: ") + e.what());
  }
  try {
    int C = j.at("C").get<int>();
    int N = j.at("N").get<int>();
    int d = j.at("d").get<int>();
    std::vector<Vec> atoms = j.at("atoms").get<std::vector<Vec>>();
    std::vector<int> nums = j.at("weights_num").get<std::vector<int>>();
    if (static_cast<int>(atoms.size()) != N || static_cast<int>(nums.size()) != N)
      throw ConfigError("PICMeasure: N disagrees with array lengths");
    PICMeasure m(std::move(atoms), ContextWeights(C, std::move(nums)));
    if (m.d != d) throw ConfigError("PICMeasure: d disagrees with atom width");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("PICMeasure: bad JSON: ") + e.what());
  }
}

ContextQuery::ContextQuery(PICMeasure mu, Vec x) : context(std::move(mu)), query(std::move(x)) {
  if (static_cast<int>(query.size()) != context.d)
    throw ConfigError("ContextQuery: query dimension must equal context dimension");
}

SignedDiscreteMeasure::SignedDiscreteMeasure(std::vector<Vec> atoms_in, Vec masses_in) {
  if (atoms_in.size() != masses_in.size())
    throw ConfigError("SignedDiscreteMeasure: atom/mass count mismatch");
  std::map<Vec, double> merged;
  for (std::size_t i = 0; i < atoms_in.size(); ++i) merged[atoms_in[i]] += masses_in[i];
  for (auto& [a, m] : merged) {
    if (m == 0.0) continue;
    atoms.push_back(a);
    masses.push_back(m);
  }
}

OutputMeasure::OutputMeasure(int D, std::vector<Vec> atoms_in) : dim(D), atoms(std::move(atoms_in)) {
  if (atoms.empty()) throw ConfigError("OutputMeasure: M must be at least 1");
  for (const auto& a : atoms)
    if (static_cast<int>(a.size()) != dim) throw ConfigError("OutputMeasure: ragged atoms");
}

namespace {

void enumerate_rec(int C, int N, int remaining, std::vector<int>& cur,
                   std::vector<ContextWeights>& out) {
  if (static_cast<int>(cur.size()) == N - 1) {
    int last = remaining;
    if (last >= 1 && last <= C) {
      cur.push_back(last);
      out.emplace_back(C, cur);
      cur.pop_back();
    }
    return;
  }
  int slots_left = N - static_cast<int>(cur.size()) - 1;
  for (int k = 1; k <= remaining - slots_left && k <= C; ++k) {
    cur.push_back(k);
    enumerate_rec(C, N, remaining - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<ContextWeights> enumerate_weights(int C, int N) {
  if (C < 1 || N < 1) throw ConfigError("enumerate_weights: C and N must be positive");
  std::vector<ContextWeights> out;
  if (C < N) return out;  // infeasible configuration
  std::vector<int> cur;
  enumerate_rec(C, N, C, cur, out);
  return out;
}

double w1_oracle(const PICMeasure& a, const PICMeasure& b) {
  if (a.C() != b.C() || a.tokens() != b.tokens() || a.d != b.d)
    throw ConfigError("w1_oracle: measures must share C, N and d");
  const int C = a.C();
  std::vector<const Vec*> ea, eb;
  ea.reserve(C);
  eb.reserve(C);
  for (int n = 0; n < a.tokens(); ++n)
    for (int r = 0; r < a.weights.num[n]; ++r) ea.push_back(&a.atoms[n]);
  for (int n = 0; n < b.tokens(); ++n)
    for (int r = 0; r < b.weights.num[n]; ++r) eb.push_back(&b.atoms[n]);
  std::vector<double> cost(static_cast<std::size_t>(C) * C);
  for (int i = 0; i < C; ++i)
    for (int j = 0; j < C; ++j) cost[i * C + j] = l1_dist(*ea[i], *eb[j]);
  return solve_assignment(cost, C) / C;
}

double w1_uniform_atoms(const std::vector<Vec>& A, const std::vector<Vec>& B) {
  if (A.size() != B.size() || A.empty())
    throw ConfigError("w1_uniform_atoms: atom counts must match");
  const int n = static_cast<int>(A.size());
  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost[i * n + j] = l1_dist(A[i], B[j]);
  return solve_assignment(cost, n) / n;
}

double w1_output(const OutputMeasure& a, const OutputMeasure& b) {
  if (a.dim != b.dim) throw ConfigError("w1_output: dimension mismatch");
  return w1_uniform_atoms(a.atoms, b.atoms);
}

double quotient_dist(const std::vector<Vec>& X, const std::vector<Vec>& Y) {
  if (X.size() != Y.size() || X.empty()) throw ConfigError("quotient_dist: shape mismatch");
  const int N = static_cast<int>(X.size());
  for (int i = 0; i < N; ++i)
    if (X[i].size() != X[0].size() || Y[i].size() != X[0].size())
      throw ConfigError("quotient_dist: shape mismatch");
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (int i = 0; i < N; ++i) {
      for (std::size_t c = 0; c < X[0].size(); ++c) {
        double dlt = X[perm[i]][c] - Y[i][c];
        s += dlt * dlt;
      }
    }
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best);
}

double kr_norm(const SignedDiscreteMeasure& m) {
  const int n = static_cast<int>(m.atoms.size());
  if (n == 0) return 0.0;
  // Variables: f+ (n), f- (n), a, b with f = f+ - f-.
  const int nv = 2 * n + 2;
  const int ia = 2 * n, ib = 2 * n + 1;
  std::vector<std::vector<double>> A;
  std::vector<double> rhs;
  auto row = [&]() -> std::vector<double>& {
    A.emplace_back(nv, 0.0);
    return A.back();
  };
  for (int i = 0; i < n; ++i) {
    auto& r1 = row();  // f_i - a <= 0
    r1[i] = 1;
    r1[n + i] = -1;
    r1[ia] = -1;
    rhs.push_back(0);
    auto& r2 = row();  // -f_i - a <= 0
    r2[i] = -1;
    r2[n + i] = 1;
    r2[ia] = -1;
    rhs.push_back(0);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      auto& r = row();  // f_i - f_j - b d_ij <= 0
      r[i] += 1;
      r[n + i] -= 1;
      r[j] -= 1;
      r[n + j] += 1;
      r[ib] = -l1_dist(m.atoms[i], m.atoms[j]);
      rhs.push_back(0);
    }
  }
  auto& rb = row();  // a + b <= 1
  rb[ia] = 1;
  rb[ib] = 1;
  rhs.push_back(1);

  std::vector<double> obj(nv, 0.0);
  for (int i = 0; i < n; ++i) {
    obj[i] = m.masses[i];
    obj[n + i] = -m.masses[i];
  }
  LpResult res = simplex_maximize(A, rhs, obj);
  if (!res.ok) throw ConfigError("kr_norm: LP did not solve");
  return res.value < 0 ? 0.0 : res.value;
}

double pair_metric(const ContextQuery& p, const ContextQuery& q) {
  if (p.query.size() != q.query.size())
    throw ConfigError("pair_metric: query dimension mismatch");
  return w1_oracle(p.context, q.context) + l1_dist(p.query, q.query);
}

SignedDiscreteMeasure signed_difference(const OutputMeasure& a, const OutputMeasure& b) {
  std::vector<Vec> atoms;
  Vec masses;
  for (const auto& x : a.atoms) {
    atoms.push_back(x);
    masses.push_back(1.0 / a.size());
  }
  for (const auto& x : b.atoms) {
    atoms.push_back(x);
    masses.push_back(-1.0 / b.size());
  }
  return SignedDiscreteMeasure(std::move(atoms), std::move(masses));
}

SignedDiscreteMeasure signed_mixture_difference(const OutputMeasure& a,
                                                const std::vector<double>& coeffs,
                                                const std::vector<OutputMeasure>& parts) {
  if (coeffs.size() != parts.size())
    throw ConfigError("signed_mixture_difference: coefficient count mismatch");
  std::vector<Vec> atoms;
  Vec masses;
  for (const auto& x : a.atoms) {
    atoms.push_back(x);
    masses.push_back(1.0 / a.size());
  }
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    for (const auto& x : parts[k].atoms) {
      atoms.push_back(x);
      masses.push_back(-coeffs[k] / parts[k].size());
    }
  }
  return SignedDiscreteMeasure(std::move(atoms), std::move(masses));
}

}  // namespace picnet::measures
