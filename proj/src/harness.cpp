// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include "picnet/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace picnet::harness {

using measures::ContextQuery;
using measures::ContextWeights;
using measures::OutputMeasure;
using measures::PICMeasure;

void ExperimentConfig::validate() const {
  if (C < 1 || N < 1 || d < 1 || M < 1 || D < 1)
    throw ConfigError("config: C, N, d, M, D must be positive");
  if (C < N) throw ConfigError("config: C >= N required for a nonempty simplex");
  if (num_samples < 1) throw ConfigError("config: num_samples must be positive");
  if (!(0 < delta_star && delta_star < delta))
    throw ConfigError("config: need 0 < delta_star < delta");
  if (moment_p < 1) throw ConfigError("config: moment_p must be >= 1");
}

namespace {

ExperimentConfig config_from(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.C = j.at("C").get<int>();
    c.N = j.at("N").get<int>();
    c.d = j.at("d").get<int>();
    c.M = j.at("M").get<int>();
    c.D = j.at("D").get<int>();
    c.num_samples = j.at("num_samples").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.delta = j.at("delta").get<double>();
    c.delta_star = j.at("delta_star").get<double>();
    c.q = j.at("q").get<double>();
    c.target_name = j.at("target").get<std::string>();
    c.moment_p = j.at("moment_p").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: bad JSON: ") + e.what());
  }
  return config_from(j);
}

std::vector<ExperimentConfig> ExperimentConfig::list_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: bad JSON: ") + e.what());
  }
  std::vector<ExperimentConfig> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(config_from(item));
  } else {
    out.push_back(config_from(j));
  }
  if (out.empty()) throw ConfigError("config: empty configuration list");
  return out;
}

std::string ExperimentConfig::to_json() const {
  std::ostringstream os;
  os << "{\"C\":" << C << ",\"N\":" << N << ",\"d\":" << d << ",\"M\":" << M << ",\"D\":" << D
     << ",\"num_samples\":" << num_samples << ",\"seed\":" << seed
     << ",\"delta\":" << fmt17(delta) << ",\"delta_star\":" << fmt17(delta_star)
     << ",\"q\":" << fmt17(q) << ",\"target\":\"" << target_name
     << "\",\"moment_p\":" << fmt17(moment_p) << "}";
  return os.str();
}

std::vector<ContextQuery> generate_samples(const ExperimentConfig& config) {
  config.validate();
  std::vector<ContextWeights> simplex = measures::enumerate_weights(config.C, config.N);
  if (simplex.empty()) throw ConfigError("generate_samples: empty simplex");
  Rng rng = Rng::stream(config.seed, 1);

  std::vector<ContextQuery> out;
  out.reserve(config.num_samples);
  const double min_sep = 1e-3;
  for (int s = 0; s < config.num_samples; ++s) {
    std::vector<Vec> atoms;
    long attempts = 0;
    while (static_cast<int>(atoms.size()) < config.N) {
      if (++attempts > 100000)
        throw ConfigError("generate_samples: rejection failed; atoms cannot be separated");
      Vec a(config.d);
      for (double& v : a) v = rng.uniform01();
      bool ok = true;
      for (const auto& b : atoms)
        if (l1_dist(a, b) < min_sep) {
          ok = false;
          break;
        }
      if (ok) atoms.push_back(std::move(a));
    }
    ContextWeights w = simplex[rng.below(simplex.size())];
    Vec query(config.d);
    for (double& v : query) v = rng.uniform01();
    out.emplace_back(PICMeasure(std::move(atoms), std::move(w)), std::move(query));
  }
  return out;
}

std::string samples_to_json(const std::vector<ContextQuery>& samples) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i) os << ",";
    os << "{\"context\":" << samples[i].context.to_json() << ",\"query\":[";
    for (std::size_t c = 0; c < samples[i].query.size(); ++c)
      os << (c ? "," : "") << fmt17(samples[i].query[c]);
    os << "]}";
  }
  os << "]";
  return os.str();
}

std::vector<ContextQuery> samples_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("samples: bad JSON: ") + e.what());
  }
  try {
    std::vector<ContextQuery> out;
    for (const auto& item : j) {
      PICMeasure mu = PICMeasure::from_json(item.at("context").dump());
      out.emplace_back(std::move(mu), item.at("query").get<Vec>());
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("samples: ") + e.what());
  }
}

namespace {

Vec project_dims(const Vec& v, int D) {
  Vec out(D, 0.0);
  for (int i = 0; i < D && i < static_cast<int>(v.size()); ++i) out[i] = v[i];
  return out;
}

}  // namespace

partition::TargetFunction target_library(const std::string& name,
                                         const ExperimentConfig& config) {
  partition::TargetFunction f;
  f.name = name;
  const int M = config.M, D = config.D;
  if (name == "mean_shift") {
    // M copies of (mean of the atoms + query), projected to R^D.
    f.lipschitz = 1.0;
    f.eval = [M, D](const ContextQuery& p) {
      Vec mean(p.context.d, 0.0);
      Vec w = p.context.weights.as_doubles();
      for (int n = 0; n < p.context.tokens(); ++n)
        for (int c = 0; c < p.context.d; ++c) mean[c] += w[n] * p.context.atoms[n][c];
      for (int c = 0; c < p.context.d; ++c) mean[c] += p.query[c];
      return OutputMeasure(D, std::vector<Vec>(M, project_dims(mean, D)));
    };
  } else if (name == "sorted_atoms") {
    // Top-M atoms by weight, ties broken lexicographically.  With M = N the
    // selection is the whole atom set and the map is C/N-Lipschitz; smaller
    // M crosses rank ties discontinuously, so no constant is claimed there.
    f.lipschitz = static_cast<double>(config.C) / config.N;
    f.eval = [M, D](const ContextQuery& p) {
      std::vector<int> idx(p.context.tokens());
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (p.context.weights.num[a] != p.context.weights.num[b])
          return p.context.weights.num[a] > p.context.weights.num[b];
        return p.context.atoms[a] < p.context.atoms[b];
      });
      std::vector<Vec> atoms;
      for (int m = 0; m < M; ++m)
        atoms.push_back(project_dims(p.context.atoms[idx[std::min<int>(m, idx.size() - 1)]], D));
      return OutputMeasure(D, std::move(atoms));
    };
  } else if (name == "barycentric") {
    // Atoms pulled halfway toward the query.
    f.lipschitz = std::max(0.5, config.C / (2.0 * config.N));
    f.eval = [M, D](const ContextQuery& p) {
      std::vector<Vec> interp;
      for (const auto& a : p.context.atoms) {
        Vec v(p.context.d);
        for (int c = 0; c < p.context.d; ++c) v[c] = 0.5 * (a[c] + p.query[c]);
        interp.push_back(std::move(v));
      }
      std::sort(interp.begin(), interp.end());
      std::vector<Vec> atoms;
      for (int m = 0; m < M; ++m)
        atoms.push_back(project_dims(interp[std::min<int>(m, interp.size() - 1)], D));
      return OutputMeasure(D, std::move(atoms));
    };
  } else {
    throw ConfigError("target_library: unknown target '" + name + "'");
  }
  return f;
}

ReportRow run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ContextQuery> samples = generate_samples(config);
  partition::TargetFunction f = target_library(config.target_name, config);
  partition::Packing packing =
      partition::greedy_packing(samples, config.delta, config.delta_star);
  partition::Approximator f_hat = partition::build_approximator(packing, f);
  partition::ModulusOfContinuity omega = partition::ModulusOfContinuity::linear(f.lipschitz);
  partition::RegionReport rep = partition::region_statistics(
      packing, samples, f, f_hat, config.moment_p, config.q, omega);

  ReportRow row;
  row.delta = config.delta;
  row.delta_star = config.delta_star;
  row.K = packing.size();
  row.trifling_fraction = rep.trifling_fraction;
  row.sup_err_approx_region = rep.sup_err_approx_region;
  row.tail_moment_p = rep.tail_moment_p;
  row.bound_omega_delta = rep.bound_omega_delta;
  row.bound_trifling = rep.bound_trifling;
  return row;
}

std::string report_csv(const Report& report) {
  std::ostringstream os;
  os << "delta,delta_star,K,trifling_fraction,sup_err_approx_region,tail_moment_p,"
        "bound_omega_delta,bound_trifling\n";
  for (const auto& r : report.rows) {
    os << fmt17(r.delta) << "," << fmt17(r.delta_star) << "," << r.K << ","
       << fmt17(r.trifling_fraction) << "," << fmt17(r.sup_err_approx_region) << ","
       << fmt17(r.tail_moment_p) << "," << fmt17(r.bound_omega_delta) << ","
       << fmt17(r.bound_trifling) << "\n";
  }
  return os.str();
}

Report report_from_csv(const std::string& text) {
  Report rep;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("report CSV: empty file");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 8) throw ConfigError("report CSV: expected 8 columns");
    ReportRow r;
    r.delta = std::stod(fields[0]);
    r.delta_star = std::stod(fields[1]);
    r.K = std::stoi(fields[2]);
    r.trifling_fraction = std::stod(fields[3]);
    r.sup_err_approx_region = std::stod(fields[4]);
    r.tail_moment_p = std::stod(fields[5]);
    r.bound_omega_delta = std::stod(fields[6]);
    r.bound_trifling = std::stod(fields[7]);
    rep.rows.push_back(r);
  }
  return rep;
}

std::string report_svg(const Report& report) {
  const int W = 640, H = 420, ml = 70, mr = 20, mt = 30, mb = 50;
  std::vector<ReportRow> rows = report.rows;
  std::sort(rows.begin(), rows.end(),
            [](const ReportRow& a, const ReportRow& b) { return a.delta < b.delta; });
  double xmin = 0, xmax = 1e-9, ymax = 1e-9;
  for (const auto& r : rows) {
    xmax = std::max(xmax, r.delta);
    ymax = std::max({ymax, r.sup_err_approx_region, r.bound_omega_delta});
  }
  auto px = [&](double x) { return ml + (W - ml - mr) * (x - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return H - mb - (H - mt - mb) * y / (ymax * 1.05); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
     << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
     << "\" stroke=\"black\"/>\n";
  auto polyline = [&](auto get, const char* color) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& r : rows) os << px(r.delta) << "," << py(get(r)) << " ";
    os << "\"/>\n";
    for (const auto& r : rows)
      os << "<circle cx=\"" << px(r.delta) << "\" cy=\"" << py(get(r))
         << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  };
  polyline([](const ReportRow& r) { return r.sup_err_approx_region; }, "#1f77b4");
  polyline([](const ReportRow& r) { return r.bound_omega_delta; }, "#d62728");
  os << "<text x=\"" << (W / 2) << "\" y=\"" << (H - 12)
     << "\" text-anchor=\"middle\" font-size=\"13\">delta</text>\n";
  os << "<text x=\"18\" y=\"" << (H / 2)
     << "\" font-size=\"13\" transform=\"rotate(-90 18 " << (H / 2)
     << ")\" text-anchor=\"middle\">sup error (blue), omega(delta) bound (red)</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace picnet::harness
