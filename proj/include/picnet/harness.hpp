// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef PICNET_HARNESS_HPP
#define PICNET_HARNESS_HPP

#include <string>
#include <vector>

#include "picnet/measures.hpp"
#include "picnet/partition.hpp"
#include "picnet/rng.hpp"

namespace picnet::harness {

struct ExperimentConfig {
  int C = 2;
  int N = 2;
  int d = 1;
  int M = 1;
  int D = 1;
  int num_samples = 100;
  std::uint64_t seed = 0;
  double delta = 0.2;
  double delta_star = 0.1;
  double q = 1.0;
  std::string target_name = "mean_shift";
  double moment_p = 1.0;

  void validate() const;
  static ExperimentConfig from_json(const std::string& text);
  static std::vector<ExperimentConfig> list_from_json(const std::string& text);
  std::string to_json() const;
};

// Seeded samples: atoms uniform in [0,1]^d with pairwise l1 separation of at
// least 1e-3 enforced by rejection, weights uniform over the contextualized
// simplex, queries uniform in [0,1]^d.
std::vector<measures::ContextQuery> generate_samples(const ExperimentConfig& config);

// Sample sets serialize to JSON so reproduction never depends on generator
// parity across implementations.
std::string samples_to_json(const std::vector<measures::ContextQuery>& samples);
std::vector<measures::ContextQuery> samples_from_json(const std::string& text);

// Named targets with documented Lipschitz constants (see the library docs).
partition::TargetFunction target_library(const std::string& name, const ExperimentConfig& config);

struct ReportRow {
  double delta = 0;
  double delta_star = 0;
  int K = 0;
  double trifling_fraction = 0;
  double sup_err_approx_region = 0;
  double tail_moment_p = 0;
  double bound_omega_delta = 0;
  double bound_trifling = 0;
};

struct Report {
  std::vector<ReportRow> rows;
  double wall_seconds = 0;
  std::string machine;
};

ReportRow run_experiment(const ExperimentConfig& config);
std::string report_csv(const Report& report);
Report report_from_csv(const std::string& text);

// Static error-versus-delta plot.
std::string report_svg(const Report& report);

// Entry point shared by the binary and the tests; returns the process exit
// code (0 success, 1 verification failure, 2 configuration error).
int cli(const std::vector<std::string>& args);

}  // namespace picnet::harness

#endif  // PICNET_HARNESS_HPP
