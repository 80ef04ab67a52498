#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "carnot/algebra.hpp"
#include "carnot/rng.hpp"
#include "oracles.hpp"

using namespace carnot;

namespace {

GroupPoint random_point(const StratifiedAlgebra& a, Rng& rng, double scale = 2.0) {
  GroupPoint x(a.total_dim());
  for (auto& v : x) v = rng.uniform(-scale, scale);
  return x;
}

double rel_err(const GroupPoint& a, const GroupPoint& b) {
  double num = 0, den = 1e-300;
  for (size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::max(std::abs(a[i]), std::abs(b[i])));
  }
  return num / den;
}

}  // namespace

TEST_CASE("heisenberg preset basics") {
  auto h1 = StratifiedAlgebra::heisenberg(1);
  CHECK(h1.hom_dim() == 4);
  CHECK(h1.total_dim() == 3);
  CHECK(h1.strata_dims() == std::vector<int>{2, 1});
  auto h2 = StratifiedAlgebra::heisenberg(2);
  CHECK(h2.hom_dim() == 6);
  // exactly two nonzero structure entries for n=1: gamma_12^1 = 1 = -gamma_21^1
  auto entries = h1.structure_entries();
  CHECK(entries.size() == 2);
  double g12 = 0, g21 = 0;
  for (auto [i, j, m, c] : entries) {
    if (i == 0 && j == 1 && m == 2) g12 = c;
    if (i == 1 && j == 0 && m == 2) g21 = c;
  }
  CHECK(g12 == 1.0);
  CHECK(g21 == -1.0);
}

TEST_CASE("preset parser") {
  CHECK(StratifiedAlgebra::preset("heisenberg-2").hom_dim() == 6);
  CHECK(StratifiedAlgebra::preset("abelian-3").hom_dim() == 3);
  CHECK_THROWS(StratifiedAlgebra::preset("nope-1"));
}

TEST_CASE("H1 product matches the step-2 BCH oracle") {
  auto h1 = StratifiedAlgebra::heisenberg(1);
  GroupPoint x = {1, 0, 0}, y = {0, 1, 0};
  auto z = multiply(h1, x, y);
  CHECK(z[0] == doctest::Approx(1.0));
  CHECK(z[1] == doctest::Approx(1.0));
  CHECK(z[2] == doctest::Approx(0.5));
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    auto a = random_point(h1, rng), b = random_point(h1, rng);
    CHECK(rel_err(multiply(h1, a, b), oracles::multiply_step2(h1, a, b)) < 1e-14);
  }
}

TEST_CASE("identity, inverse, associativity on step-2 presets") {
  Rng rng(11);
  for (const auto& alg : {StratifiedAlgebra::heisenberg(1),
                          StratifiedAlgebra::heisenberg(2),
                          StratifiedAlgebra::random_step2(3, 2, 99)}) {
    GroupPoint e(alg.total_dim(), 0.0);
    for (int t = 0; t < 300; ++t) {
      auto x = random_point(alg, rng);
      auto y = random_point(alg, rng);
      auto z = random_point(alg, rng);
      CHECK(rel_err(multiply(alg, e, x), x) < 1e-15);
      CHECK(rel_err(multiply(alg, x, e), x) < 1e-15);
      auto xinv = inverse(x);
      auto prod = multiply(alg, x, xinv);
      for (double v : prod) CHECK(std::abs(v) < 1e-13);
      CHECK(rel_err(multiply(alg, multiply(alg, x, y), z),
                    multiply(alg, x, multiply(alg, y, z))) < 1e-12);
    }
  }
}

TEST_CASE("associativity on a step-3 filiform algebra") {
  // [e1,e2]=e3, [e1,e3]=e4 (Engel algebra); exercises the degree-3 BCH terms
  auto alg = StratifiedAlgebra::from_structure(
      3, {2, 1, 1}, {{1, 2, 3, 1.0}, {1, 3, 4, 1.0}});
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    GroupPoint x(4), y(4), z(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = rng.uniform(-1.5, 1.5);
      y[i] = rng.uniform(-1.5, 1.5);
      z[i] = rng.uniform(-1.5, 1.5);
    }
    CHECK(rel_err(multiply(alg, multiply(alg, x, y), z),
                  multiply(alg, x, multiply(alg, y, z))) < 1e-12);
    auto prod = multiply(alg, x, inverse(x));
    for (double v : prod) CHECK(std::abs(v) < 1e-13);
  }
}

TEST_CASE("dilations are automorphisms and the norm is 1-homogeneous") {
  Rng rng(17);
  for (const auto& alg : {StratifiedAlgebra::heisenberg(1),
                          StratifiedAlgebra::random_step2(4, 2, 5)}) {
    for (int t = 0; t < 300; ++t) {
      auto x = random_point(alg, rng);
      auto y = random_point(alg, rng);
      double lam = std::exp(rng.uniform(-1.5, 1.5));
      auto lhs = dilate(alg, lam, multiply(alg, x, y));
      auto rhs = multiply(alg, dilate(alg, lam, x), dilate(alg, lam, y));
      CHECK(rel_err(lhs, rhs) < 1e-12);
      CHECK(hom_norm(alg, dilate(alg, lam, x)) ==
            doctest::Approx(lam * hom_norm(alg, x)).epsilon(1e-12));
    }
    // lambda = 1 is the identity
    auto x = random_point(alg, rng);
    CHECK(rel_err(dilate(alg, 1.0, x), x) == 0.0);
    CHECK_THROWS(dilate(alg, 0.0, x));
  }
}

TEST_CASE("hom_norm values on H1") {
  auto h1 = StratifiedAlgebra::heisenberg(1);
  CHECK(hom_norm(h1, {0, 0, 0}) == 0.0);
  CHECK(hom_norm(h1, {1, 0, 0}) == doctest::Approx(1.0));
  CHECK(hom_norm(h1, {1, 0, 1}) == doctest::Approx(std::pow(2.0, 0.25)));
  // H1 dilation weights: (1,1,2)
  auto d = dilate(h1, 2.0, {1, 1, 1});
  CHECK(d[0] == 2.0);
  CHECK(d[1] == 2.0);
  CHECK(d[2] == 4.0);
}

TEST_CASE("distance: identity at coincidence, left-invariance") {
  auto h1 = StratifiedAlgebra::heisenberg(1);
  Rng rng(23);
  for (int t = 0; t < 300; ++t) {
    auto x = random_point(h1, rng);
    auto y = random_point(h1, rng);
    auto z = random_point(h1, rng);
    CHECK(distance(h1, x, x) == 0.0);
    CHECK(distance(h1, {0, 0, 0}, x) == doctest::Approx(hom_norm(h1, x)));
    CHECK(distance(h1, multiply(h1, z, x), multiply(h1, z, y)) ==
          doctest::Approx(distance(h1, x, y)).epsilon(1e-10));
  }
}

TEST_CASE("ball volume scaling and quadrature cross-check") {
  auto h1 = StratifiedAlgebra::heisenberg(1);
  CHECK_THROWS(ball_volume_mc(h1, 1.0, 100, 1));

  auto v1 = ball_volume_mc(h1, 1.0, 400000, 100);
  auto v2 = ball_volume_mc(h1, 2.0, 400000, 200);
  double Q = h1.hom_dim();
  double ratio = v2.estimate / v1.estimate;
  double sig = ratio * std::sqrt(std::pow(v1.stderr_ / v1.estimate, 2) +
                                 std::pow(v2.stderr_ / v2.estimate, 2));
  CHECK(std::abs(ratio - std::pow(2.0, Q)) < 3.0 * sig);

  // stderr ~ samples^{-1/2}
  auto s1 = ball_volume_mc(h1, 1.0, 100000, 7);
  auto s2 = ball_volume_mc(h1, 1.0, 400000, 7);
  CHECK(s1.stderr_ / s2.stderr_ == doctest::Approx(2.0).epsilon(0.1));

  // deterministic grid quadrature oracle at 200^3 for omega_G on H1:
  // midpoint rule over the bounding box
  int N = 200;
  double hx = 2.0 / N;
  double quad = 0.0;
  for (int i = 0; i < N; ++i) {
    double x = -1.0 + (i + 0.5) * hx;
    for (int j = 0; j < N; ++j) {
      double y = -1.0 + (j + 0.5) * hx;
      double r4 = (x * x + y * y) * (x * x + y * y);
      if (r4 >= 1.0) continue;
      // |t| < sqrt(1 - r4) analytically in the last axis
      quad += 2.0 * std::sqrt(1.0 - r4) * hx * hx;
    }
  }
  CHECK(std::abs(v1.estimate - quad) < 4.0 * v1.stderr_ + 2e-3);
  // determinism: same seed, same estimate
  auto v1b = ball_volume_mc(h1, 1.0, 400000, 100);
  CHECK(v1b.estimate == v1.estimate);
}

TEST_CASE("volume ratio constant in R (Haar scaling)") {
  auto h1 = StratifiedAlgebra::heisenberg(1);
  double Q = h1.hom_dim();
  for (double R : {0.5, 1.0, 3.0}) {
    auto v = ball_volume_mc(h1, R, 200000, 31);
    auto vr = v.estimate / std::pow(R, Q);
    auto base = ball_volume_mc(h1, 1.0, 200000, 32);
    CHECK(std::abs(vr - base.estimate) <
          3.0 * (v.stderr_ / std::pow(R, Q) + base.stderr_));
  }
}

TEST_CASE("cd_parameters on Heisenberg groups vs sphere-sweep oracle") {
  // H^n satisfies rho2 = n/2, kappa = 1, d = 2n by the Prop 2.3 forms
  for (int n : {1, 2, 3}) {
    auto h = StratifiedAlgebra::heisenberg(n);
    auto cd = cd_parameters(h);
    CHECK(cd.rho2 == doctest::Approx(0.5 * n).epsilon(1e-12));
    CHECK(cd.kappa == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cd.d == 2 * n);
    CHECK(cd.bigD == doctest::Approx((1.0 + 3.0 / n) * 2 * n).epsilon(1e-12));
  }
  auto h1 = StratifiedAlgebra::heisenberg(1);
  auto cd = cd_parameters(h1);
  CHECK(cd.bigD == doctest::Approx(8.0));

  // brute-force sweep over the unit sphere agrees
  auto gamma = [&](int i, int j) {
    for (auto [m, c] : h1.bracket(i, j))
      if (m == 2) return c;
    return 0.0;
  };
  auto q_rho = [&](std::span<const double> z) {
    double s = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) s += 0.25 * gamma(i, j) * z[0] * gamma(i, j) * z[0];
    return s;
  };
  auto q_kappa = [&](std::span<const double> x) {
    double s = 0;
    for (int j = 0; j < 2; ++j) {
      double inner = 0;
      for (int i = 0; i < 2; ++i) inner += gamma(i, j) * x[i];
      s += inner * inner;
    }
    return s;
  };
  CHECK(std::abs(oracles::sphere_extreme(q_rho, 1, false, 5) - cd.rho2) < 1e-9);
  CHECK(std::abs(oracles::sphere_extreme(q_kappa, 2, true, 6) - cd.kappa) < 1e-9);
}

TEST_CASE("cd_parameters rejects degenerate cases") {
  auto ab2 = StratifiedAlgebra::from_structure(2, {2, 1}, {});  // zero bracket
  CHECK_THROWS_AS(cd_parameters(ab2), std::domain_error);
  CHECK_THROWS(cd_parameters(StratifiedAlgebra::abelian(2)));  // step != 2
}

TEST_CASE("structure validation") {
  // grading violation: bracket of two horizontal vectors landing in layer 1
  CHECK_THROWS(StratifiedAlgebra::from_structure(2, {2, 1},
                                                 {{1, 2, 1, 1.0}, {2, 1, 1, -1.0}}));
  // antisymmetry violation
  CHECK_THROWS(StratifiedAlgebra::from_structure(2, {2, 1},
                                                 {{1, 2, 3, 1.0}, {2, 1, 3, 1.0}}));
  // Jacobi at step 3, strata {3,3,1}: with [e1,e2]=e4, [e1,e3]=e5, [e2,e3]=e6,
  // the cyclic sum on (e1,e2,e3) is [e1,e6] - [e2,e5] + [e3,e4]
  std::vector<std::tuple<int, int, int, double>> layer2 = {
      {1, 2, 4, 1.0}, {1, 3, 5, 1.0}, {2, 3, 6, 1.0}};
  auto unbalanced = layer2;
  unbalanced.push_back({1, 6, 7, 1.0});  // [e1,e6]=e7 alone breaks Jacobi
  CHECK_THROWS(StratifiedAlgebra::from_structure(3, {3, 3, 1}, unbalanced));
  auto balanced = layer2;
  balanced.push_back({1, 6, 7, 1.0});
  balanced.push_back({2, 5, 7, 1.0});  // [e2,e5]=e7 restores the cyclic sum
  CHECK_NOTHROW(StratifiedAlgebra::from_structure(3, {3, 3, 1}, balanced));
}
