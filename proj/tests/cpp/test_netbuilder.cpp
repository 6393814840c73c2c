// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "picnet/netbuilder.hpp"
#include "picnet/rng.hpp"

using namespace picnet;
using namespace picnet::netbuilder;

namespace {

Vec rand_vec(Rng& rng, int n, double lo = -10, double hi = 10) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

double closed_bump(double t, double ds, double dl) {
  double a = std::fabs(t);
  if (a <= ds) return 1.0;
  if (a >= dl) return 0.0;
  return (a - dl) / (ds - dl);
}

}  // namespace

TEST_CASE("activation configurations") {
  CompiledNet id_net = affine_net(Affine::identity(1));
  CompiledNet::Stage s;
  s.act = {ActivationParams::identity()};
  s.affine = Affine::identity(1);
  id_net.stages.push_back(s);
  for (double x : {-3.0, 0.0, 2.5}) CHECK(id_net.eval({x})[0] == doctest::Approx(x));

  CHECK(activate(ActivationParams::relu(), -3.0) == doctest::Approx(0.0));
  CHECK(activate(ActivationParams::relu(), 2.0) == doctest::Approx(2.0));
  CHECK(activate(ActivationParams::requ(), 3.0) == doctest::Approx(9.0));
  CHECK(activate(ActivationParams::requ(), -3.0) == doctest::Approx(0.0));
  CHECK(activate(ActivationParams::identity(), -1.5) == doctest::Approx(-1.5));
  // general exponent accepted by eval
  CHECK(activate({2.0, 0.5, 1.0}, 4.0) == doctest::Approx(4.0));
}

TEST_CASE("abs gadget: exactness and size") {
  CompiledNet net = build_abs();
  CHECK(net.depth() == 1);
  CHECK(net.width() == 2);
  CHECK(net.eval({-5.0})[0] == doctest::Approx(5.0));
  CHECK(net.eval({0.0})[0] == doctest::Approx(0.0));
  CHECK(net.eval({7.0})[0] == doctest::Approx(7.0));
  Rng rng(1);
  for (int t = 0; t < 10000; ++t) {
    double x = rng.uniform(-10, 10);
    CHECK(std::fabs(net.eval({x})[0] - std::fabs(x)) <= 1e-9);
  }
}

TEST_CASE("l1 gadget: exactness and size") {
  for (int F : {1, 2, 3, 5, 8}) {
    CompiledNet net = build_l1_norm(F);
    CHECK(net.depth() == F);
    CHECK(net.width() <= F * F + std::max(2 - F, 0));
    Rng rng(100 + F);
    for (int t = 0; t < 2000; ++t) {
      Vec x = rand_vec(rng, F);
      CHECK(std::fabs(net.eval(x)[0] - l1_norm(x)) <= 1e-9);
    }
  }
  CompiledNet one = build_l1_norm(1);
  CHECK(one.eval({-4.0})[0] == doctest::Approx(4.0));
  CHECK(one.depth() == 1);
  CHECK(one.width() <= 2);
  CHECK(build_l1_norm(3).eval({1.0, -2.0, 3.0})[0] == doctest::Approx(6.0));
  CHECK(build_l1_norm(2).eval({0.0, 0.0})[0] == doctest::Approx(0.0));
}

TEST_CASE("squared l2 gadget: exactness and size") {
  for (int F : {1, 2, 4}) {
    CompiledNet net = build_sq_l2_norm(F);
    CHECK(net.depth() == 1);
    CHECK(net.width() == 2 * F);
    Rng rng(200 + F);
    for (int t = 0; t < 2000; ++t) {
      Vec x = rand_vec(rng, F);
      double want = 0;
      for (double v : x) want += v * v;
      CHECK(std::fabs(net.eval(x)[0] - want) <= 1e-9 * std::max(1.0, want));
    }
  }
  CHECK(build_sq_l2_norm(2).eval({3.0, 4.0})[0] == doctest::Approx(25.0));
  CHECK(build_sq_l2_norm(1).eval({-2.0})[0] == doctest::Approx(4.0));
}

TEST_CASE("mult gadget: exactness") {
  CHECK(build_mult(1).eval({2.0, 3.0})[0] == doctest::Approx(6.0));
  CHECK(build_mult(1).eval({0.0, 17.0})[0] == doctest::Approx(0.0));
  Vec two = build_mult(2).eval({1.0, -2.0, 3.0, 4.0});
  CHECK(two[0] == doctest::Approx(3.0));
  CHECK(two[1] == doctest::Approx(-8.0));
  Rng rng(3);
  CompiledNet net = build_mult(3);
  for (int t = 0; t < 10000; ++t) {
    Vec x = rand_vec(rng, 6);
    Vec y = net.eval(x);
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(y[i] - x[i] * x[3 + i]) <= 1e-9);
  }
}

TEST_CASE("min gadget: exactness and logarithmic depth") {
  CHECK(build_min(1).eval({5.0})[0] == doctest::Approx(5.0));
  CHECK(build_min(3).eval({3.0, 1.0, 2.0})[0] == doctest::Approx(1.0));
  CHECK(build_min(4).eval({2.0, 2.0, 2.0, 2.0})[0] == doctest::Approx(2.0));
  for (int K : {2, 3, 5, 8, 13}) {
    CompiledNet net = build_min(K);
    CHECK(net.depth() == static_cast<int>(std::ceil(std::log2(K))));
    Rng rng(300 + K);
    for (int t = 0; t < 2000; ++t) {
      Vec x = rand_vec(rng, K);
      CHECK(std::fabs(net.eval(x)[0] - *std::min_element(x.begin(), x.end())) <= 1e-9);
    }
  }
}

TEST_CASE("inner product gadget: exactness") {
  CHECK(build_inner_product(2).eval({1.0, 0.0, 1.0, 0.0})[0] == doctest::Approx(1.0));
  CHECK(build_inner_product(2).eval({1.0, 0.0, 0.0, 1.0})[0] == doctest::Approx(0.0));
  CHECK(build_inner_product(2).eval({1.0, 2.0, 3.0, 4.0})[0] == doctest::Approx(11.0));
  Rng rng(4);
  CompiledNet net = build_inner_product(4);
  for (int t = 0; t < 10000; ++t) {
    Vec x = rand_vec(rng, 8);
    double want = 0;
    for (int i = 0; i < 4; ++i) want += x[i] * x[4 + i];
    CHECK(std::fabs(net.eval(x)[0] - want) <= 1e-8 * std::max(1.0, std::fabs(want)));
  }
}

TEST_CASE("bump gadget: trapezoid values and size") {
  double ds = 0.5, dl = 1.25;
  CompiledNet net = build_bump(ds, dl, 1);
  CHECK(net.depth() == 2);
  CHECK(net.width() <= 5);
  CHECK(net.eval({ds})[0] == doctest::Approx(1.0));
  CHECK(net.eval({dl})[0] == doctest::Approx(0.0));
  CHECK(net.eval({2.0})[0] == doctest::Approx(0.0));
  CHECK(net.eval({(ds + dl) / 2})[0] == doctest::Approx(0.5));
  CHECK(net.eval({-(ds + dl) / 2})[0] == doctest::Approx(0.5));
  Rng rng(5);
  for (int t = 0; t < 10000; ++t) {
    double x = rng.uniform(-10, 10);
    CHECK(std::fabs(net.eval({x})[0] - closed_bump(x, ds, dl)) <= 1e-9);
  }
  CompiledNet cube = build_bump(0.25, 0.75, 3);
  for (int t = 0; t < 2000; ++t) {
    Vec x = rand_vec(rng, 3, -2, 2);
    double want = 1;
    for (double v : x) want *= closed_bump(v, 0.25, 0.75);
    CHECK(std::fabs(cube.eval(x)[0] - want) <= 1e-9);
  }
  CHECK_THROWS_AS(build_bump(1.0, 0.5, 1), ConfigError);
  CHECK_THROWS_AS(build_bump(0.0, 0.5, 1), ConfigError);
}

TEST_CASE("threshold gadget: ramp values") {
  for (int C : {1, 2, 4}) {
    CompiledNet net = build_threshold(C);
    CHECK(net.eval({-1.0})[0] == doctest::Approx(1.0));
    CHECK(net.eval({0.0})[0] == doctest::Approx(1.0));
    CHECK(net.eval({1.0 / (2.0 * C)})[0] == doctest::Approx(0.0));
    CHECK(net.eval({1.0 / (4.0 * C)})[0] == doctest::Approx(0.5));
    CHECK(net.eval({5.0})[0] == doctest::Approx(0.0));
    Rng rng(400 + C);
    for (int t = 0; t < 10000; ++t) {
      double x = rng.uniform(-10, 10);
      double want = x <= 0 ? 1.0 : (x >= 1.0 / (2.0 * C) ? 0.0 : 1.0 - 2.0 * C * x);
      CHECK(std::fabs(net.eval({x})[0] - want) <= 1e-9);
    }
  }
}

TEST_CASE("parallelize: evaluation homomorphism and stated bounds") {
  SUBCASE("two abs branches") {
    CompiledNet net = parallelize({build_abs(), build_abs()});
    Vec y = net.eval({-1.0, 2.0});
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(2.0));
    CHECK(net.depth() <= 2 + 1);
    CHECK(net.width() <= 2 + 2 * 2);  // sum of input dims + max width^2
  }
  SUBCASE("single net is unchanged pointwise") {
    CompiledNet inner = build_l1_norm(3);
    CompiledNet par = parallelize({inner});
    Rng rng(6);
    for (int t = 0; t < 1000; ++t) {
      Vec x = rand_vec(rng, 3);
      CHECK(par.eval(x)[0] == doctest::Approx(inner.eval(x)[0]).epsilon(1e-12));
    }
  }
  SUBCASE("l1 and squared l2 in parallel") {
    CompiledNet net = parallelize({build_l1_norm(2), build_sq_l2_norm(2)});
    Vec y = net.eval({3.0, -4.0, 3.0, 4.0});
    CHECK(y[0] == doctest::Approx(7.0));
    CHECK(y[1] == doctest::Approx(25.0));
    CHECK(net.depth() <= build_l1_norm(2).depth() + build_sq_l2_norm(2).depth() + 1);
    int bound = 4 + std::max(build_l1_norm(2).width(), build_sq_l2_norm(2).width()) *
                        std::max(build_l1_norm(2).width(), build_sq_l2_norm(2).width());
    CHECK(net.width() <= bound);
  }
  SUBCASE("general homomorphism on random gadgets") {
    std::vector<CompiledNet> nets = {build_abs(), build_sq_l2_norm(2), build_min(3)};
    CompiledNet par = parallelize(nets);
    Rng rng(7);
    for (int t = 0; t < 500; ++t) {
      Vec x = rand_vec(rng, 6);
      Vec y = par.eval(x);
      CHECK(std::fabs(y[0] - nets[0].eval({x[0]})[0]) <= 1e-9);
      CHECK(std::fabs(y[1] - nets[1].eval({x[1], x[2]})[0]) <= 1e-9);
      CHECK(std::fabs(y[2] - nets[2].eval({x[3], x[4], x[5]})[0]) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(parallelize({}), ConfigError);
}

TEST_CASE("compose: seam merging and examples") {
  // negate then abs
  Affine neg(SparseMatrix(1, 1), Vec(1, 0.0));
  neg.W.add(0, 0, -1.0);
  CompiledNet net = compose(build_abs(), affine_net(neg));
  CHECK(net.eval({3.0})[0] == doctest::Approx(3.0));
  CHECK(net.depth() == 1);

  // identity composed with a gadget is pointwise the gadget
  CompiledNet f = build_l1_norm(2);
  CompiledNet idf = compose(affine_net(Affine::identity(1)), f);
  Rng rng(8);
  for (int t = 0; t < 1000; ++t) {
    Vec x = rand_vec(rng, 2);
    CHECK(idf.eval(x)[0] == doctest::Approx(f.eval(x)[0]).epsilon(1e-12));
  }

  // min of two abs values
  CompiledNet m = compose(build_min(2), parallelize({build_abs(), build_abs()}));
  CHECK(m.eval({-3.0, 2.0})[0] == doctest::Approx(2.0));
  CHECK(m.depth() == compose(build_min(2), parallelize({build_abs(), build_abs()})).depth());
  CHECK_THROWS_AS(compose(build_l1_norm(2), build_abs()), ConfigError);
}

TEST_CASE("piecewise linearity with p=1 activations") {
  // midpoint linearity on short random segments that avoid kinks
  CompiledNet net = build_l1_norm(3);
  Rng rng(9);
  int tested = 0;
  while (tested < 500) {
    Vec a = rand_vec(rng, 3);
    bool safe = true;
    for (double v : a)
      if (std::fabs(v) < 0.05) safe = false;  // keep clear of the kink at 0
    if (!safe) continue;
    Vec b = a, mid = a;
    for (int i = 0; i < 3; ++i) {
      double step = (a[i] > 0 ? 1 : -1) * 0.01;
      b[i] = a[i] + step;
      mid[i] = a[i] + step / 2;
    }
    double lhs = net.eval(mid)[0];
    double rhs = 0.5 * (net.eval(a)[0] + net.eval(b)[0]);
    CHECK(std::fabs(lhs - rhs) <= 1e-9);
    ++tested;
  }
}

TEST_CASE("metadata recount matches serialized layers") {
  for (const CompiledNet& net :
       {build_abs(), build_l1_norm(3), build_mult(2), build_bump(0.2, 0.6, 2),
        build_threshold(3)}) {
    CompiledNet canon = canonicalize(net);
    std::size_t nnz = 0;
    nnz += canon.input_affine.W.nnz();
    for (double v : canon.input_affine.c)
      if (v != 0.0) ++nnz;
    for (const auto& s : canon.stages) {
      nnz += s.affine.W.nnz();
      for (double v : s.affine.c)
        if (v != 0.0) ++nnz;
    }
    CHECK(nnz == canon.nonzero_params());
    int w = 0;
    for (const auto& s : canon.stages) w = std::max(w, static_cast<int>(s.act.size()));
    CHECK(w == canon.width());
    CHECK(static_cast<int>(canon.stages.size()) == canon.depth());
  }
}

TEST_CASE("net JSON round-trip preserves evaluation and metadata") {
  Rng rng(10);
  for (const CompiledNet& net :
       {build_abs(), build_l1_norm(2), build_bump(0.3, 0.9, 2), build_threshold(2),
        build_min(3)}) {
    std::string text = to_json(net);
    CompiledNet back = from_json(text);
    CHECK(to_json(back) == text);
    for (int t = 0; t < 200; ++t) {
      Vec x = rand_vec(rng, net.input_dim);
      Vec a = net.eval(x), b = back.eval(x);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));
    }
  }
  CHECK_THROWS_AS((void)from_json("["), ConfigError);

  // an affine-only net with a bias gains one identity stage when serialized
  Affine a(SparseMatrix::identity(2), {0.5, -1.0});
  CompiledNet plain = affine_net(a);
  CompiledNet back = from_json(to_json(plain));
  for (int t = 0; t < 100; ++t) {
    Vec x = rand_vec(rng, 2);
    Vec u = plain.eval(x), v = back.eval(x);
    CHECK(u[0] == doctest::Approx(v[0]).epsilon(1e-15));
    CHECK(u[1] == doctest::Approx(v[1]).epsilon(1e-15));
  }
}
