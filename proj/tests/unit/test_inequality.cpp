#include "quantest/error.hpp"
#include "quantest/inequality.hpp"

#include "gen.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace quantest;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("midpoint grid") {
  const auto g = inequality_grid(4);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == 0.125);
  CHECK(g[3] == 0.875);
  CHECK_THROWS_AS(inequality_grid(1), std::invalid_argument);
}

TEST_CASE("closed-form lognormal QRI agrees with quadrature") {
  for (double sigma : {0.25, 0.5, 1.0, 1.5}) {
    CHECK_THAT(oracle::lognormal_qri_closed(sigma),
               WithinAbs(oracle::lognormal_qri_quadrature(sigma), 1e-6));
  }
  CHECK_THAT(oracle::lognormal_qri_closed(1.0), WithinAbs(0.6638, 1e-4));
}

TEST_CASE("constant samples give zero") {
  const Sample c(std::vector<double>(37, 4.2));
  CHECK(qri_estimate(c) == 0.0);
  CHECK(g2_estimate(c) == 0.0);
  CHECK(g2_estimate(c, 7) == 0.0);
}

TEST_CASE("estimates match the definition") {
  auto g = gen::rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = gen::positive(g, gen::size_between(g, 2, 200));
    const int J = static_cast<int>(gen::size_between(g, 2, 150));
    double qri = 0.0, g2 = 0.0;
    for (int i = 1; i <= J; ++i) {
      const double p = (i - 0.5) / J;
      const double r = oracle::type8(x, p / 2) / oracle::type8(x, 1 - p / 2);
      qri += 1 - r;
      g2 += p * r;
    }
    qri /= J;
    g2 = 1 - 2 * g2 / J;
    const Sample s(x);
    CHECK_THAT(qri_estimate(s, J), WithinAbs(qri, 1e-10));
    CHECK_THAT(g2_estimate(s, J), WithinAbs(g2, 1e-10));
  }
}

TEST_CASE("bounds and scale invariance") {
  auto g = gen::rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = gen::positive(g, gen::size_between(g, 2, 300));
    const double a = 0.01 + 50.0 * gen::unit(g);
    const Sample s(x), t(gen::scaled(x, a));
    const double q = qri_estimate(s), g2 = g2_estimate(s);
    CHECK(q >= 0.0);
    CHECK(q < 1.0);
    CHECK(g2 >= 0.0);
    CHECK(g2 < 1.0);
    CHECK_THAT(qri_estimate(t), WithinAbs(q, 1e-12));
    CHECK_THAT(g2_estimate(t), WithinAbs(g2, 1e-12));
  }
  const double two = qri_estimate(Sample({1.0, 3.0}));
  CHECK(two > 0.0);
  CHECK(two < 1.0);
}

TEST_CASE("positivity is required") {
  CHECK_THROWS_WITH(qri_estimate(Sample({0.0, 1.0, 2.0})), "QRI requires positive data");
  CHECK_THROWS_WITH(g2_estimate(Sample({-1.0, 1.0, 2.0})), "G2 requires positive data");
  CHECK_THROWS_AS(qri_estimate(Sample({1.0, 2.0}), 1), std::invalid_argument);
}

TEST_CASE("gradient matches finite differences at J = 2") {
  const std::vector<double> lower{1.3, 2.1}, upper{5.0, 3.4};
  for (auto kind : {IneqKind::QRI, IneqKind::G2}) {
    auto f = [kind](std::vector<double> l, std::vector<double> u) {
      double total = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double p = (i + 0.5) / 2.0;
        const double w = kind == IneqKind::QRI ? 1.0 : 2.0 * p;
        total += w * l[i] / u[i];
      }
      return 1.0 - total / 2.0;
    };
    const auto g = ineq_gradient(kind, lower, upper);
    REQUIRE(g.size() == 4);
    const double h = 1e-6;
    for (int k = 0; k < 4; ++k) {
      auto lp = lower, up = upper, lm = lower, um = upper;
      if (k < 2) {
        lp[k] += h;
        lm[k] -= h;
      } else {
        up[k - 2] += h;
        um[k - 2] -= h;
      }
      CHECK_THAT(g[k], WithinAbs((f(lp, up) - f(lm, um)) / (2 * h), 1e-8));
    }
  }
  // hand values for QRI: -1/(J u_i) and l_i/(J u_i^2)
  const auto q = ineq_gradient(IneqKind::QRI, lower, upper);
  CHECK_THAT(q[0], WithinAbs(-1.0 / 10.0, 1e-15));
  CHECK_THAT(q[2], WithinAbs(1.3 / (2 * 25.0), 1e-15));
  // G2 at J = 2 has weights 2 p_i = 0.5, 1.5
  const auto g2 = ineq_gradient(IneqKind::G2, lower, upper);
  CHECK_THAT(g2[1], WithinAbs(-1.5 / (2 * 3.4), 1e-15));
}

TEST_CASE("variance is a nonnegative quadratic form") {
  auto g = gen::rng(63);
  for (int trial = 0; trial < 50; ++trial) {
    const Sample s(gen::positive(g, gen::size_between(g, 20, 400)));
    InequalitySpec spec;
    spec.kind = trial % 2 ? IneqKind::G2 : IneqKind::QRI;
    spec.J = static_cast<int>(gen::size_between(g, 2, 100));
    CHECK(ineq_variance(s, spec) >= 0.0);
  }
}

TEST_CASE("large lognormal samples") {
  auto g = gen::rng(64);
  const Sample s(gen::lognormal(g, 100000));
  CHECK_THAT(qri_estimate(s), WithinAbs(oracle::lognormal_qri_closed(1.0), 0.01));
  CHECK_THAT(g2_estimate(s), WithinAbs(oracle::lognormal_g2_quadrature(1.0), 0.01));
  CHECK(std::abs(qri_estimate(s, 100) - qri_estimate(s, 1000)) <= 0.005);
  CHECK(std::abs(g2_estimate(s, 100) - g2_estimate(s, 1000)) <= 0.005);
}

TEST_CASE("tests and their nulls") {
  auto g = gen::rng(65);
  const Sample x(gen::lognormal(g, 300)), y(gen::lognormal(g, 150, 0, 0.5));
  InequalitySpec spec;
  const auto one = qineq_test(x, std::nullopt, spec);
  CHECK(one.null_value == 0.5);
  CHECK(one.estimate == qri_estimate(x));
  CHECK(one.hypothesis == "true QRI is not equal to 0.5");

  const auto two = qineq_test(x, y, spec);
  CHECK(two.null_value == 0.0);
  CHECK(two.estimate_label == "difference in QRI");
  CHECK_THAT(two.se, WithinRel(std::hypot(one.se, qineq_test(y, std::nullopt, spec).se), 1e-12));

  const auto same = qineq_test(x, x, spec);
  CHECK(same.estimate == 0.0);
  CHECK(same.p_value == 1.0);

  spec.kind = IneqKind::G2;
  spec.true_ineq = 0.4;
  CHECK(qineq_test(x, y, spec).null_value == 0.4);
}

TEST_CASE("Z under the true null is rarely extreme") {
  auto g = gen::rng(66);
  InequalitySpec spec;
  spec.true_ineq = oracle::lognormal_qri_closed(1.0);
  int ok = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const auto res = qineq_test(Sample(gen::lognormal(g, 10000)), std::nullopt, spec);
    ok += std::abs(res.statistic) < 3.0;
  }
  CHECK(ok >= 0.99 * reps);
}
