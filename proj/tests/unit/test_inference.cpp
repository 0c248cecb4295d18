#include "quantest/cli/csv.hpp"
#include "quantest/covariance.hpp"
#include "quantest/error.hpp"
#include "quantest/inference.hpp"

#include "gen.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace quantest;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Sample bladder() { return cli::load_column(QUANTEST_TEST_DATA_DIR "/bladder_cancer.csv", "").sample; }

void check_identical(const TestResult& a, const TestResult& b) {
  CHECK(a.estimate == b.estimate);
  CHECK(a.se == b.se);
  CHECK(a.statistic == b.statistic);
  CHECK(a.p_value == b.p_value);
  CHECK(a.conf_low == b.conf_low);
  CHECK(a.conf_high == b.conf_high);
}

}  // namespace

TEST_CASE("quadratic forms") {
  auto g = gen::rng(51);
  const Sample s(gen::normal(g, 120));
  const std::vector<double> ps{0.25, 0.5, 0.75};
  const auto c = qcov(s, ps);
  const auto xhat = sample_quantiles(s, ps);

  const std::vector<double> unit{0, 1, 0};
  const auto med = lincomb_stats(c, xhat, unit);
  CHECK(med.v1 == c(1, 1));
  CHECK(med.est1 == xhat[1]);

  const std::vector<double> iqr{-1, 0, 1};
  CHECK_THAT(lincomb_stats(c, xhat, iqr).v1,
             WithinRel(c(0, 0) + c(2, 2) - 2 * c(0, 2), 1e-12));

  const auto same = lincomb_stats(c, xhat, iqr, iqr);
  CHECK_THAT(*same.v12, WithinRel(same.v1, 1e-14));
  CHECK_THAT(*same.v2, WithinRel(same.v1, 1e-14));

  CHECK_THROWS_AS(lincomb_stats(c, xhat, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("ratio delta method") {
  const auto r = ratio_variance(2, 4, 0.01, 0.04, 0);
  CHECK(r.ratio == 0.5);
  CHECK_THAT(r.var_ratio, WithinAbs(0.00125, 1e-15));
  CHECK_THAT(r.var_log(), WithinAbs(0.005, 1e-15));

  CHECK_THAT(ratio_variance(3, 3, 0.2, 0.2, 0.2).var_ratio, WithinAbs(0.0, 1e-15));
  CHECK_THAT(ratio_variance(0, 2, 0.1, 0.3, 0.05).var_ratio, WithinAbs(0.025, 1e-15));
  CHECK_THROWS_WITH(ratio_variance(1, 0, 1, 1, 0), "zero denominator");
  CHECK_THROWS_WITH(ratio_variance(-1, 2, 1, 1, 0).var_log(), "log of non-positive ratio");

  // bracket form from the delta method, for cases where it is defined
  auto g = gen::rng(52);
  for (int i = 0; i < 200; ++i) {
    const double e1 = 0.1 + gen::unit(g), e2 = 0.1 + gen::unit(g);
    const double v1 = gen::unit(g), v2 = gen::unit(g), v12 = 0.5 * (gen::unit(g) - 0.5);
    const double R = e1 / e2;
    const double bracket = R * R * (v1 / (e1 * e1) + v2 / (e2 * e2) - 2 * v12 / (e1 * e2));
    CHECK_THAT(ratio_variance(e1, e2, v1, v2, v12).var_ratio, WithinRel(bracket, 1e-10));
  }
}

TEST_CASE("Wald intervals and p-values") {
  const auto two = wald_interval(0, 1, 0.95, Alternative::TwoSided);
  CHECK_THAT(two.lower, WithinAbs(-1.959964, 1e-6));
  CHECK_THAT(two.upper, WithinAbs(1.959964, 1e-6));
  const auto less = wald_interval(0, 1, 0.95, Alternative::Less);
  CHECK(std::isinf(less.lower));
  CHECK_THAT(less.upper, WithinAbs(1.644854, 1e-6));
  const auto greater = wald_interval(0, 1, 0.95, Alternative::Greater);
  CHECK_THAT(greater.lower, WithinAbs(-1.644854, 1e-6));
  CHECK(std::isinf(greater.upper));
  const auto clamped = wald_interval(0.1, 0.3 / 1.959964, 0.95, Alternative::TwoSided, 0.0);
  CHECK(clamped.lower == 0.0);
  CHECK_THAT(clamped.upper, WithinAbs(0.4, 1e-6));
  CHECK_THROWS_AS(wald_interval(0, -1, 0.95, Alternative::TwoSided), std::domain_error);

  CHECK(p_value(0, Alternative::TwoSided) == 1.0);
  CHECK(p_value(9.408, Alternative::TwoSided) < 2.2e-16);
  CHECK_THAT(p_value(-2.0898, Alternative::TwoSided), WithinAbs(0.03664, 5e-6));
  CHECK_THAT(p_value(1.0, Alternative::Less), WithinAbs(oracle::Phi(1.0), 1e-14));
  CHECK_THAT(p_value(1.0, Alternative::Greater), WithinAbs(1 - oracle::Phi(1.0), 1e-14));
}

TEST_CASE("alternatives parse") {
  CHECK(parse_alternative("two.sided") == Alternative::TwoSided);
  CHECK(parse_alternative("two-sided") == Alternative::TwoSided);
  CHECK(parse_alternative("less") == Alternative::Less);
  CHECK(parse_alternative("greater") == Alternative::Greater);
  CHECK_THROWS_AS(parse_alternative("both"), std::invalid_argument);
}

TEST_CASE("bladder cancer median and upper quartile") {
  const Sample s = bladder();
  REQUIRE(s.size() == 128);
  const auto med = q_test_one(s, resolve_measure("median"));
  CHECK(med.estimate == 6.395);
  CHECK_THAT(med.statistic, WithinAbs(9.408, 0.05));
  CHECK(med.p_value < 2.2e-16);
  CHECK_THAT(med.conf_low, WithinAbs(5.062726, 0.02));
  CHECK_THAT(med.conf_high, WithinAbs(7.727274, 0.02));
  CHECK_THAT(med.se, WithinAbs(0.679744, 1e-5));
  CHECK(med.method == "One sample test of the median");
  CHECK(med.hypothesis == "true median is not equal to 0");

  const auto q75 = q_test_one(s, MeasureSpec::from_vectors({0.75}));
  CHECK_THAT(q75.conf_low, WithinAbs(9.168747, 0.05));
  CHECK_THAT(q75.conf_high, WithinAbs(14.632920, 0.05));
  CHECK_THAT(q75.conf_low, WithinAbs(9.168747, 1e-5));
  CHECK_THAT(q75.conf_high, WithinAbs(14.632920, 1e-5));
}

TEST_CASE("three constructions of rCViqr agree bit for bit") {
  auto g = gen::rng(53);
  const auto named = resolve_measure("rCViqr");
  const auto vectors = MeasureSpec::from_vectors({0.25, 0.75}, {-0.75, 0.75}, {0.5}, {1});
  const auto matrix =
      MeasureSpec::from_matrix({0.25, 0.5, 0.75}, {{-0.75, 0, 0.75}, {0, 1, 0}});
  for (int trial = 0; trial < 50; ++trial) {
    const Sample s(gen::positive(g, gen::size_between(g, 20, 300)));
    for (bool log : {false, true}) {
      TestOptions o;
      o.log_transf = log;
      o.back_transf = log;
      if (log) o.true_q = 0.5;
      const auto a = q_test_one(s, named, o);
      check_identical(a, q_test_one(s, vectors, o));
      check_identical(a, q_test_one(s, matrix, o));
    }
  }
}

TEST_CASE("one-sample invariants on random data") {
  auto g = gen::rng(54);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = gen::any(g, gen::size_between(g, 20, 300));
    const Sample s(x);
    TestOptions o;
    o.true_q = sample_quantile(s, 0.5) + (gen::unit(g) - 0.5);
    o.conf_level = 0.5 + 0.49 * gen::unit(g);
    const auto r = q_test_one(s, resolve_measure("median"), o);

    CHECK_THAT(r.p_value, WithinAbs(2 * oracle::Phi(-std::abs(r.statistic)), 1e-14));
    CHECK(r.conf_low <= r.estimate);
    CHECK(r.estimate <= r.conf_high);
    const bool outside = o.true_q < r.conf_low || o.true_q > r.conf_high;
    const double alpha = 1 - o.conf_level;
    if (std::abs(r.p_value - alpha) > 1e-10) CHECK(outside == (r.p_value < alpha));

    TestOptions wider = o;
    wider.conf_level = std::min(0.999, o.conf_level + 0.05);
    const auto w = q_test_one(s, resolve_measure("median"), wider);
    CHECK(w.conf_low <= r.conf_low);
    CHECK(w.conf_high >= r.conf_high);

    const double c = 50 * (gen::unit(g) - 0.5);
    TestOptions shifted = o;
    shifted.true_q = o.true_q + c;
    const auto sh = q_test_one(Sample(gen::scaled(x, 1, c)), resolve_measure("median"), shifted);
    CHECK_THAT(sh.statistic, WithinAbs(r.statistic, 1e-6 * (1 + std::abs(r.statistic))));
    CHECK_THAT(sh.p_value, WithinAbs(r.p_value, 1e-6));

    TestOptions clamp = o;
    clamp.min_q = r.estimate - 1e-3;
    CHECK(q_test_one(s, resolve_measure("median"), clamp).conf_low >= clamp.min_q);
  }
}

TEST_CASE("null at the estimate gives Z = 0") {
  const Sample s = bladder();
  TestOptions o;
  o.true_q = 6.395;
  const auto r = q_test_one(s, resolve_measure("median"), o);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("log scale and back transformation") {
  auto g = gen::rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const Sample s(gen::positive(g, gen::size_between(g, 30, 300)));
    const auto spec = resolve_measure(trial % 2 ? "rCViqr" : "qr9010");
    TestOptions lg;
    lg.log_transf = true;
    lg.true_q = std::log(0.8);
    const auto l = q_test_one(s, spec, lg);
    CHECK(l.scale == Scale::Log);
    TestOptions bk = lg;
    bk.back_transf = true;
    bk.true_q = 0.8;
    const auto b = q_test_one(s, spec, bk);
    CHECK(b.scale == Scale::BackTransformedRatio);
    CHECK(b.conf_low == std::exp(l.conf_low));
    CHECK(b.conf_high == std::exp(l.conf_high));
    CHECK_THAT(std::exp(l.estimate), WithinRel(b.estimate, 1e-12));
    CHECK_THAT(b.statistic, WithinAbs(l.statistic, 1e-12));
    CHECK(b.warnings.empty());
  }
  TestOptions o;
  o.log_transf = true;
  o.back_transf = true;
  CHECK_THROWS_AS(q_test_one(bladder(), resolve_measure("rCViqr"), o), std::domain_error);
  o.back_transf = false;
  CHECK_THROWS_WITH(q_test_one(Sample({-3, -2, -1, 0, 1}), resolve_measure("median"), o),
                    "log of non-positive estimate");
  TestOptions bad;
  bad.back_transf = true;
  CHECK_THROWS_AS(q_test_one(bladder(), resolve_measure("median"), bad), std::invalid_argument);
}

TEST_CASE("ratio on the identity scale warns") {
  const auto r = q_test_one(bladder(), resolve_measure("rCViqr"));
  REQUIRE(r.warnings.size() == 1);
  CHECK_THAT(r.warnings[0], ContainsSubstring("log"));
}

TEST_CASE("two-sample tests") {
  auto g = gen::rng(56);
  const Sample x(gen::lognormal(g, 200, 0, 1));
  const Sample y(gen::lognormal(g, 80, 0.3, 0.6));
  const auto spec = resolve_measure("rCViqr");

  TestOptions lg;
  lg.log_transf = true;
  const auto ox = q_test_one(x, spec, lg), oy = q_test_one(y, spec, lg);
  const auto l = q_test_two(x, y, spec, lg);
  CHECK_THAT(l.estimate, WithinAbs(ox.estimate - oy.estimate, 1e-14));
  CHECK_THAT(l.se, WithinAbs(std::hypot(ox.se, oy.se), 1e-14));
  CHECK(l.estimate_label == "log ratio of Robust CVs");

  TestOptions bk = lg;
  bk.back_transf = true;
  const auto b = q_test_two(x, y, spec, bk);
  CHECK(b.null_value == 1.0);
  CHECK(b.estimate_label == "ratio of Robust CVs");
  CHECK_THAT(b.estimate, WithinRel(std::exp(ox.estimate - oy.estimate), 1e-12));
  CHECK(b.conf_low == std::exp(l.conf_low));
  CHECK(b.conf_high == std::exp(l.conf_high));
  CHECK(b.method == "Two sample test of the robust coefficient of variation (0.75*IQR/median)");

  const auto d = q_test_two(x, y, spec);
  CHECK(d.estimate_label == "difference in Robust CVs");
  CHECK_FALSE(d.warnings.empty());

  const auto same = q_test_two(x, x, resolve_measure("median"));
  CHECK(same.estimate == 0.0);
  CHECK(same.p_value == 1.0);
}
