// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef PICNET_PARTITION_HPP
#define PICNET_PARTITION_HPP

#include <functional>
#include <string>
#include <vector>

#include "picnet/measures.hpp"
#include "picnet/netbuilder.hpp"

namespace picnet::partition {

using measures::ContextQuery;
using measures::OutputMeasure;

// Modulus of continuity with its inverse for rate reporting.  The
// constructor validates monotonicity on a sample grid and omega(0) = 0.
struct ModulusOfContinuity {
  std::function<double(double)> omega;
  std::function<double(double)> omega_inv;

  ModulusOfContinuity(std::function<double(double)> w, std::function<double(double)> w_inv,
                      double grid_max = 10.0);
  static ModulusOfContinuity linear(double L);
};

struct Packing {
  std::vector<ContextQuery> landmarks;
  double delta = 0;
  double delta_star = 0;

  int size() const { return static_cast<int>(landmarks.size()); }
};

constexpr int kTrifling = -1;

struct CellAssignment {
  std::vector<int> label;  // cell index or kTrifling
};

struct TargetFunction {
  std::string name;
  double lipschitz = 1.0;
  std::function<OutputMeasure(const ContextQuery&)> eval;
};

// Farthest-point greedy selection starting from the first sample; the result
// is a maximal delta-packing of the sample set and hence a delta-net.
Packing greedy_packing(const std::vector<ContextQuery>& samples, double delta,
                       double delta_star);

// Labels samples by the recursive retracted-cell rule: first landmark k with
// distance < delta_star wins, provided no earlier landmark is within delta.
CellAssignment assign_cells(const Packing& packing, const std::vector<ContextQuery>& samples);

// Piecewise-constant approximator on the full-delta cells.
struct PwcApproximator {
  Packing packing;
  std::vector<OutputMeasure> values;

  const OutputMeasure& eval(const ContextQuery& p) const;
};
PwcApproximator pwc_approximator(const Packing& packing, const TargetFunction& f);

// Exact indicator of the k-th retracted cell outside the trifling region.
netbuilder::CompiledNet build_indicator_net(const Packing& packing, int k);

// Compiled approximator: the flat output reshapes to the M x D atom block of
// the predicted measure.  Keeps the joint indicator net and cell values for
// reporting.
struct Approximator {
  netbuilder::CompiledNet net;         // R^{N(d+1)+d} -> R^{M*D}
  netbuilder::CompiledNet indicators;  // R^{N(d+1)+d} -> R^K, all cell gates
  std::vector<OutputMeasure> values;
  int M = 1;
  int D = 1;

  OutputMeasure predict(const ContextQuery& p) const;
  std::vector<double> indicator_values(const ContextQuery& p) const;
};
Approximator build_approximator(const Packing& packing, const TargetFunction& f);

// Input vector for indicator/approximator nets: [vec(X) | w | x].
Vec pack_query(const ContextQuery& p);

struct RegionReport {
  int total = 0;
  int trifling_count = 0;
  double trifling_fraction = 0;
  double sup_err_approx_region = 0;
  double tail_moment_p = 0;      // KR-norm moment over the trifling region
  double bound_omega_delta = 0;  // omega(delta)
  double bound_trifling = 0;     // K (delta^q - delta_star^q)
  double bound_trifling_noK = 0; // delta^q - delta_star^q
};

RegionReport region_statistics(const Packing& packing, const std::vector<ContextQuery>& samples,
                               const TargetFunction& f, const Approximator& f_hat,
                               double moment_p, double q, const ModulusOfContinuity& omega);

}  // namespace picnet::partition

#endif  // PICNET_PARTITION_HPP
