// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "picnet/rng.hpp"
#include "picnet/w1net.hpp"
#include "test_support.hpp"

using namespace picnet;
using namespace picnet::measures;
using namespace picnet::w1net;
using picnet::testing::random_pic;

namespace {

long long fact(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// marginal check in exact integers over C
void check_vertex(const TransportVertex& v) {
  const int N = v.N;
  for (int i = 0; i < N; ++i) {
    long long row = 0, col = 0;
    for (int j = 0; j < N; ++j) {
      row += v.plan_num[i * N + j];
      col += v.plan_num[j * N + i];
      REQUIRE(v.plan_num[i * N + j] >= 0);
    }
    CHECK(row == v.w.num[i]);
    CHECK(col == v.v.num[i]);
  }
  CHECK(v.support_size() <= 2 * N - 1);
}

}  // namespace

TEST_CASE("transport vertices: single atom") {
  ContextWeights w(3, {3});
  auto vs = enumerate_transport_vertices(w, w);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].plan_num == std::vector<long long>{3});
}

TEST_CASE("transport vertices: uniform 2x2 are the two scaled permutations") {
  ContextWeights u(2, {1, 1});
  auto vs = enumerate_transport_vertices(u, u);
  REQUIRE(vs.size() == 2);
  for (const auto& v : vs) check_vertex(v);
  CHECK(vs[0].plan_num == std::vector<long long>{0, 1, 1, 0});
  CHECK(vs[1].plan_num == std::vector<long long>{1, 0, 0, 1});
}

TEST_CASE("transport vertices: skewed marginals") {
  ContextWeights w(4, {2, 2}), v(4, {1, 3});
  auto vs = enumerate_transport_vertices(w, v);
  REQUIRE(vs.size() == 2);
  for (const auto& x : vs) check_vertex(x);
  CHECK_THROWS_AS(
      (void)enumerate_transport_vertices(ContextWeights(2, {1, 1}), ContextWeights(4, {1, 3})),
      ConfigError);
}

TEST_CASE("transport vertices: marginal soundness and LP optimum equals the oracle") {
  Rng rng(41);
  for (int C = 1; C <= 4; ++C) {
    for (int N = 1; N <= 3 && N <= C; ++N) {
      auto simplex = enumerate_weights(C, N);
      for (const auto& w : simplex) {
        for (const auto& v : simplex) {
          auto vs = enumerate_transport_vertices(w, v);
          REQUIRE(!vs.empty());
          for (const auto& x : vs) check_vertex(x);
          // uniform marginals admit at least the N! scaled permutations
          if (C % N == 0 && w.num == std::vector<int>(N, C / N) && v.num == w.num)
            CHECK(static_cast<long long>(vs.size()) >= fact(N));
          for (int trial = 0; trial < 100; ++trial) {
            PICMeasure a(random_pic(rng, C, N, 2).atoms, w);
            PICMeasure b(random_pic(rng, C, N, 2).atoms, v);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& x : vs) {
              Vec plan = x.plan();
              double cost = 0;
              for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                  cost += plan[i * N + j] * l1_dist(a.atoms[i], b.atoms[j]);
              best = std::min(best, cost);
            }
            CHECK(best == doctest::Approx(w1_oracle(a, b)).epsilon(1e-9));
          }
        }
      }
    }
  }
}

TEST_CASE("build_w1_uniform: exactness, invariance, and size accounting") {
  Rng rng(43);
  for (int N = 1; N <= 3; ++N) {
    for (int d = 1; d <= 2; ++d) {
      auto net = build_w1_uniform(N, d);
      ContextWeights u(N, std::vector<int>(N, 1));
      for (int t = 0; t < 200; ++t) {
        PICMeasure a(random_pic(rng, N, N, d).atoms, u);
        PICMeasure b(random_pic(rng, N, N, d).atoms, u);
        double got = net.eval(pack_atoms(a, b))[0];
        CHECK(std::fabs(got - w1_oracle(a, b)) <= 1e-6);
      }
      // documented explicit-constant caps on the recorded sizes
      double log2_fact = std::log2(static_cast<double>(fact(N)));
      CHECK(net.depth() <= N * d + static_cast<int>(std::ceil(log2_fact)) + 1);
      CHECK(net.width() <= 2.0 * fact(N) * N * N * d + 2);
    }
  }

  auto net = build_w1_uniform(1, 1);
  CHECK(net.eval({0.0, 1.0})[0] == doctest::Approx(1.0));
  auto net2 = build_w1_uniform(2, 1);
  CHECK(net2.eval({0.0, 1.0, 0.0, 3.0})[0] == doctest::Approx(1.0));
  CHECK(net2.eval({0.0, 1.0, 0.0, 1.0})[0] == doctest::Approx(0.0));
  CHECK(net.role == "w1_uniform");
}

TEST_CASE("build_w1_uniform: permutation invariance of either block") {
  Rng rng(47);
  int N = 3, d = 2;
  auto net = build_w1_uniform(N, d);
  ContextWeights u(N, {1, 1, 1});
  for (int t = 0; t < 20; ++t) {
    PICMeasure a(random_pic(rng, N, N, d).atoms, u);
    PICMeasure b(random_pic(rng, N, N, d).atoms, u);
    double ref = net.eval(pack_atoms(a, b))[0];
    std::vector<int> perm = {0, 1, 2};
    do {
      std::vector<Vec> pa(N);
      for (int i = 0; i < N; ++i) pa[i] = a.atoms[perm[i]];
      PICMeasure ap(pa, u);
      CHECK(std::fabs(net.eval(pack_atoms(ap, b))[0] - ref) <= 1e-9);
      CHECK(std::fabs(net.eval(pack_atoms(b, ap))[0] - ref) <= 1e-9);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("build_w1_uniform: budget guard") {
  CHECK_THROWS_AS((void)build_w1_uniform(6, 1), CapacityError);  // 720 > 200
}

TEST_CASE("build_w1_fixed_weights: agreement with the uniform net and the oracle") {
  Rng rng(53);
  SUBCASE("uniform pair reduces to the permutation net") {
    ContextWeights u(2, {1, 1});
    auto fixed = build_w1_fixed_weights(u, u, 1);
    auto uniform = build_w1_uniform(2, 1);
    for (int t = 0; t < 100; ++t) {
      PICMeasure a(random_pic(rng, 2, 2, 1).atoms, u);
      PICMeasure b(random_pic(rng, 2, 2, 1).atoms, u);
      Vec in = pack_atoms(a, b);
      CHECK(std::fabs(fixed.eval(in)[0] - uniform.eval(in)[0]) <= 1e-9);
    }
  }
  SUBCASE("skewed pair matches the C-expansion oracle") {
    ContextWeights w(4, {2, 2}), v(4, {1, 3});
    auto net = build_w1_fixed_weights(w, v, 1);
    CHECK(net.role == "w1_fixed");
    for (int t = 0; t < 200; ++t) {
      PICMeasure a(random_pic(rng, 4, 2, 1).atoms, w);
      PICMeasure b(random_pic(rng, 4, 2, 1).atoms, v);
      CHECK(std::fabs(net.eval(pack_atoms(a, b))[0] - w1_oracle(a, b)) <= 1e-6);
    }
    PICMeasure a({{0.0}, {1.0}}, w), b({{0.0}, {1.0}}, v);
    CHECK(net.eval(pack_atoms(a, b))[0] == doctest::Approx(w1_oracle(a, b)));
  }
  SUBCASE("identical inputs sit at distance zero") {
    ContextWeights w(3, {1, 2});
    auto net = build_w1_fixed_weights(w, w, 2);
    PICMeasure a = PICMeasure(random_pic(rng, 3, 2, 2).atoms, w);
    CHECK(std::fabs(net.eval(pack_atoms(a, a))[0]) <= 1e-9);
  }
}

TEST_CASE("build_w1_contextual: oracle sweep and gate behaviour") {
  Rng rng(59);
  SUBCASE("C=1 N=1 reduces to the l1 distance between atoms") {
    auto net = build_w1_contextual(1, 1, 2);
    for (int t = 0; t < 100; ++t) {
      PICMeasure a = random_pic(rng, 1, 1, 2);
      PICMeasure b = random_pic(rng, 1, 1, 2);
      CHECK(std::fabs(net.eval(pack_contextual(a, b))[0] - l1_dist(a.atoms[0], b.atoms[0])) <=
            1e-9);
    }
  }
  SUBCASE("C=2 N=2 matches the oracle on 500 random pairs") {
    auto net = build_w1_contextual(2, 2, 2);
    CHECK(net.role == "w1_contextual");
    for (int t = 0; t < 500; ++t) {
      PICMeasure a = random_pic(rng, 2, 2, 2);
      PICMeasure b = random_pic(rng, 2, 2, 2);
      CHECK(std::fabs(net.eval(pack_contextual(a, b))[0] - w1_oracle(a, b)) <= 1e-9);
    }
  }
  SUBCASE("gates select exactly the true weight pair") {
    // on-grid weights: the gate of the matching pair reads 1, others 0
    const int C = 4, N = 2;
    auto simplex = enumerate_weights(C, N);
    auto gate = [&](const ContextWeights& wt, const ContextWeights& vt,
                    const ContextWeights& w, const ContextWeights& v) {
      double s = 0;
      for (int i = 0; i < N; ++i) {
        s += std::fabs(static_cast<double>(w.num[i] - wt.num[i])) / C;
        s += std::fabs(static_cast<double>(v.num[i] - vt.num[i])) / C;
      }
      auto th = netbuilder::build_threshold(C);
      return th.eval({s})[0];
    };
    for (const auto& w : simplex)
      for (const auto& v : simplex)
        for (const auto& wt : simplex)
          for (const auto& vt : simplex) {
            double g = gate(wt, vt, w, v);
            if (wt.num == w.num && vt.num == v.num)
              CHECK(g == doctest::Approx(1.0));
            else
              CHECK(g == doctest::Approx(0.0));
          }
  }
  SUBCASE("budget guard") {
    // |Delta_{8,4}|^2 = 35^2 = 1225 > 200
    CHECK_THROWS_AS((void)build_w1_contextual(8, 4, 1), CapacityError);
    CHECK_THROWS_AS((void)build_w1_contextual(1, 2, 1), ConfigError);
  }
}

TEST_CASE("build_w1_contextual: permutation invariance with weights permuted") {
  Rng rng(61);
  auto net = build_w1_contextual(3, 2, 2);
  for (int t = 0; t < 50; ++t) {
    PICMeasure a = random_pic(rng, 3, 2, 2);
    PICMeasure b = random_pic(rng, 3, 2, 2);
    double ref = net.eval(pack_contextual(a, b))[0];
    PICMeasure ap({a.atoms[1], a.atoms[0]},
                  ContextWeights(3, {a.weights.num[1], a.weights.num[0]}));
    CHECK(std::fabs(net.eval(pack_contextual(ap, b))[0] - ref) <= 1e-9);
    CHECK(std::fabs(net.eval(pack_contextual(b, ap))[0] - ref) <= 1e-9);
  }
}
