// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include <sys/utsname.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "picnet/harness.hpp"
#include "picnet/transformer.hpp"
#include "picnet/w1net.hpp"

namespace picnet::harness {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write file: " + path);
  f << text;
}

// Deterministic parallel map: results land at fixed indices, reductions run
// sequentially afterwards, so the thread count never changes the output.
template <class Fn>
std::vector<double> parallel_map(std::size_t n, int threads, Fn&& fn) {
  std::vector<double> out(n, 0.0);
  if (threads <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

measures::PICMeasure random_measure(Rng& rng, int C, int N, int d,
                                    const std::vector<measures::ContextWeights>& simplex) {
  std::vector<Vec> atoms;
  while (static_cast<int>(atoms.size()) < N) {
    Vec a(d);
    for (double& v : a) v = rng.uniform01();
    bool ok = true;
    for (const auto& b : atoms)
      if (l1_dist(a, b) < 1e-3) ok = false;
    if (ok) atoms.push_back(std::move(a));
  }
  (void)C;
  return measures::PICMeasure(std::move(atoms), simplex[rng.below(simplex.size())]);
}

int verify_w1_net(const netbuilder::CompiledNet& net, int trials, std::uint64_t seed,
                  int threads) {
  auto need = [&](const char* k) {
    auto it = net.tags.find(k);
    if (it == net.tags.end())
      throw ConfigError(std::string("verify-w1: net metadata lacks ") + k);
    return it->second;
  };
  const int N = need("N"), d = need("d");
  std::vector<measures::ContextWeights> simplex;
  bool contextual = net.role == "w1_contextual";
  if (contextual)
    simplex = measures::enumerate_weights(need("C"), N);
  else if (net.role == "w1_uniform")
    simplex = {measures::ContextWeights(N, std::vector<int>(N, 1))};
  else
    throw ConfigError("verify-w1: unsupported net role '" + net.role + "'");

  std::vector<std::pair<measures::PICMeasure, measures::PICMeasure>> pairs;
  Rng rng = Rng::stream(seed, 7);
  int C = contextual ? need("C") : N;
  for (int t = 0; t < trials; ++t)
    pairs.push_back({random_measure(rng, C, N, d, simplex),
                     random_measure(rng, C, N, d, simplex)});

  std::vector<double> devs = parallel_map(pairs.size(), threads, [&](std::size_t i) {
    const auto& [a, b] = pairs[i];
    Vec in = contextual ? w1net::pack_contextual(a, b) : w1net::pack_atoms(a, b);
    return std::fabs(net.eval(in)[0] - measures::w1_oracle(a, b));
  });
  double worst = 0;
  for (double v : devs) worst = std::max(worst, v);
  std::cout << "verify-w1: trials=" << trials << " max|net-oracle|=" << fmt17(worst) << "\n";
  return worst <= 1e-6 ? 0 : 1;
}

int verify_equal_nets(const netbuilder::CompiledNet& mlp, const transformer::TransformerNet& tf,
                      int trials, std::uint64_t seed, int threads) {
  if (tf.input_dim() != mlp.input_dim)
    throw ConfigError("verify-equal: nets disagree on input dimension");
  std::vector<Vec> inputs(trials, Vec(mlp.input_dim));
  Rng rng = Rng::stream(seed, 11);
  for (auto& x : inputs)
    for (double& v : x) v = rng.uniform(-10.0, 10.0);
  std::vector<double> devs = parallel_map(inputs.size(), threads, [&](std::size_t i) {
    Vec a = mlp.eval(inputs[i]);
    Vec b = transformer::transformer_eval(tf, inputs[i]);
    double worst = 0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::fabs(a[k] - b[k]));
    return worst;
  });
  double worst = 0;
  for (double v : devs) worst = std::max(worst, v);
  std::cout << "verify-equal: trials=" << trials << " max|mlp-tf|=" << fmt17(worst) << "\n";
  return worst <= 1e-9 ? 0 : 1;
}

}  // namespace

int cli(const std::vector<std::string>& args) {
  CLI::App app{"exact in-context W1 networks: compilers, verifiers, experiments"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("--seed", seed, "global seed for verification sweeps");
  app.add_option("--threads", threads, "worker threads for sweeps");

  auto* c_compile = app.add_subcommand("compile-w1", "compile an exact W1 network");
  int C = 2, N = 2, d = 1;
  std::string out_path, mode = "contextual";
  c_compile->add_option("--C", C, "context window")->required();
  c_compile->add_option("--N", N, "token count")->required();
  c_compile->add_option("--d", d, "ambient dimension")->required();
  c_compile->add_option("--out", out_path, "output net JSON path")->required();
  c_compile->add_option("--mode", mode, "contextual|uniform");

  auto* c_verify = app.add_subcommand("verify-w1", "sweep a compiled net against the oracle");
  std::string net_path;
  int trials = 500;
  c_verify->add_option("--net", net_path, "net JSON path")->required();
  c_verify->add_option("--trials", trials, "number of random pairs");

  auto* c_approx = app.add_subcommand("approx", "run an approximation experiment");
  std::string config_path, csv_path;
  c_approx->add_option("--config", config_path, "experiment config JSON")->required();
  c_approx->add_option("--out", csv_path, "output CSV path")->required();

  auto* c_tf = app.add_subcommand("transformerify", "convert a net to a transformer");
  std::string tf_in, tf_out;
  int tokens = 1;
  c_tf->add_option("--in", tf_in, "input net JSON")->required();
  c_tf->add_option("--out", tf_out, "output transformer JSON")->required();
  c_tf->add_option("--tokens", tokens, "token count N")->required();

  auto* c_eq = app.add_subcommand("verify-equal", "check a converted net against the original");
  std::string eq_mlp, eq_tf;
  int eq_trials = 10000;
  c_eq->add_option("--mlp", eq_mlp, "net JSON path")->required();
  c_eq->add_option("--tf", eq_tf, "transformer JSON path")->required();
  c_eq->add_option("--trials", eq_trials, "number of random inputs");

  auto* c_report = app.add_subcommand("report", "plot a report CSV");
  std::string rep_in, rep_plot;
  c_report->add_option("--in", rep_in, "report CSV path")->required();
  c_report->add_option("--plot", rep_plot, "output SVG path")->required();

  std::vector<const char*> argv;
  argv.push_back("picnet");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::cerr << "picnet: error=cli detail=\"" << e.what() << "\"\n";
    return 2;
  }

  try {
    if (c_compile->parsed()) {
      netbuilder::CompiledNet net;
      if (mode == "contextual")
        net = w1net::build_w1_contextual(C, N, d);
      else if (mode == "uniform")
        net = w1net::build_w1_uniform(N, d);
      else
        throw ConfigError("compile-w1: mode must be contextual or uniform");
      write_file(out_path, netbuilder::to_json(net));
      std::cout << "compile-w1: wrote " << out_path << " depth=" << net.depth()
                << " width=" << net.width() << " nnz=" << net.nonzero_params() << "\n";
      return 0;
    }
    if (c_verify->parsed())
      return verify_w1_net(netbuilder::from_json(read_file(net_path)), trials, seed, threads);
    if (c_approx->parsed()) {
      auto configs = ExperimentConfig::list_from_json(read_file(config_path));
      Report report;
      utsname uts{};
      if (uname(&uts) == 0)
        report.machine = std::string(uts.sysname) + " " + uts.release + " " + uts.machine;
      auto t0 = std::chrono::steady_clock::now();
      for (const auto& cfg : configs) report.rows.push_back(run_experiment(cfg));
      report.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_file(csv_path, report_csv(report));
      std::cerr << "approx: rows=" << report.rows.size() << " wall_s=" << report.wall_seconds
                << " machine=\"" << report.machine << "\"\n";
      return 0;
    }
    if (c_tf->parsed()) {
      netbuilder::CompiledNet net = netbuilder::from_json(read_file(tf_in));
      transformer::TransformerNet tnet = transformer::transformerify(net, tokens);
      write_file(tf_out, transformer::to_json(tnet));
      std::cout << "transformerify: wrote " << tf_out << " blocks=" << tnet.blocks.size()
                << " heads=" << tnet.max_heads() << " nnz=" << tnet.nonzero_params() << "\n";
      return 0;
    }
    if (c_eq->parsed())
      return verify_equal_nets(netbuilder::from_json(read_file(eq_mlp)),
                               transformer::transformer_from_json(read_file(eq_tf)), eq_trials,
                               seed, threads);
    if (c_report->parsed()) {
      Report rep = report_from_csv(read_file(rep_in));
      write_file(rep_plot, report_svg(rep));
      std::cout << "report: wrote " << rep_plot << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "picnet: error=config detail=\"" << e.what() << "\"\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "picnet: error=capacity detail=\"" << e.what() << "\"\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "picnet: error=internal detail=\"" << e.what() << "\"\n";
    return 2;
  }
  return 2;
}

}  // namespace picnet::harness
