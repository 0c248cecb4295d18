#include "quantest/inference.hpp"

#include "quantest/error.hpp"
#include "quantest/normal.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace quantest {

namespace {

constexpr std::string_view kRatioWarning =
    "You may wish to consider using a log transformation for ratios (e.g. --log). "
    "If you choose to use a log transformation you can also back-transform to the "
    "ratio scale using --back.";

constexpr std::string_view kFlooredWarning =
    "A quantile density estimate was not positive and was floored; the standard error "
    "may be unreliable.";

double quadratic_form(const QuantileCov& cov, std::span<const double> a,
                      std::span<const double> b) {
  const auto d = cov.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += cov(i, j) * b[j];
    total += a[i] * row;
  }
  return total;
}

// Null value on the working scale.
double working_null(const TestOptions& opts, double true_q) {
  if (opts.log_transf && opts.back_transf) {
    if (!(true_q > 0.0)) {
      throw std::domain_error(
          "with back-transformation the null value must be positive (it is on the ratio scale)");
    }
    return std::log(true_q);
  }
  return true_q;
}

void finish(TestResult& r, double working, double se, double null_work, const TestOptions& opts) {
  r.se = se;
  r.statistic = z_statistic(working, null_work, se);
  r.p_value = p_value(r.statistic, opts.alternative);
  Interval ci = wald_interval(working, se, opts.conf_level, opts.alternative);
  if (opts.back_transf) {
    ci = {std::exp(ci.lower), std::exp(ci.upper)};
    r.estimate = std::exp(working);
    r.scale = Scale::BackTransformedRatio;
  } else {
    r.estimate = working;
    r.scale = opts.log_transf ? Scale::Log : Scale::Identity;
  }
  r.conf_low = std::max(ci.lower, opts.min_q);
  r.conf_high = std::max(ci.upper, r.conf_low);
  r.conf_level = opts.conf_level;
  r.alternative = opts.alternative;
}

}  // namespace

double z_statistic(double estimate, double null_value, double se) noexcept {
  const double diff = estimate - null_value;
  if (se > 0.0) return diff / se;
  if (diff == 0.0) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), diff);
}

std::string hypothesis_sentence(std::string_view label, Alternative alt, double null_value) {
  std::ostringstream os;
  os << "true " << label;
  switch (alt) {
    case Alternative::TwoSided: os << " is not equal to "; break;
    case Alternative::Less: os << " is less than "; break;
    case Alternative::Greater: os << " is greater than "; break;
  }
  os << null_value;
  return os.str();
}

std::string_view to_string(Alternative alt) noexcept {
  switch (alt) {
    case Alternative::TwoSided: return "two.sided";
    case Alternative::Less: return "less";
    case Alternative::Greater: return "greater";
  }
  return "two.sided";
}

Alternative parse_alternative(std::string_view text) {
  if (text == "two.sided" || text == "two_sided" || text == "two-sided") {
    return Alternative::TwoSided;
  }
  if (text == "less") return Alternative::Less;
  if (text == "greater") return Alternative::Greater;
  throw std::invalid_argument("alternative must be one of two.sided, less, greater");
}

std::string_view to_string(Scale scale) noexcept {
  switch (scale) {
    case Scale::Identity: return "identity";
    case Scale::Log: return "log";
    case Scale::BackTransformedRatio: return "back_transformed_ratio";
  }
  return "identity";
}

void TestOptions::validate() const {
  if (!(conf_level > 0.0 && conf_level < 1.0)) {
    throw std::domain_error("confidence level must lie in (0, 1)");
  }
  if (back_transf && !log_transf) {
    throw std::invalid_argument("back-transformation requires the log transformation");
  }
}

LinCombStats lincomb_stats(const QuantileCov& cov, std::span<const double> xhat,
                           std::span<const double> b1, std::span<const double> b2) {
  const auto d = cov.dim();
  if (xhat.size() != d || b1.size() != d || (!b2.empty() && b2.size() != d)) {
    throw std::invalid_argument("coefficient/estimate dimensions do not match the covariance");
  }
  LinCombStats out;
  for (std::size_t i = 0; i < d; ++i) out.est1 += b1[i] * xhat[i];
  out.v1 = quadratic_form(cov, b1, b1);
  if (!b2.empty()) {
    double e2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) e2 += b2[i] * xhat[i];
    out.est2 = e2;
    out.v2 = quadratic_form(cov, b2, b2);
    out.v12 = quadratic_form(cov, b1, b2);
  }
  return out;
}

double RatioVariance::var_log() const {
  if (!(ratio > 0.0)) throw Error("log of non-positive ratio");
  return var_ratio / (ratio * ratio);
}

RatioVariance ratio_variance(double est1, double est2, double v1, double v2, double v12) {
  if (est2 == 0.0) throw Error("zero denominator");
  const double e2sq = est2 * est2;
  RatioVariance out;
  out.ratio = est1 / est2;
  out.var_ratio = v1 / e2sq + est1 * est1 * v2 / (e2sq * e2sq) - 2.0 * est1 * v12 / (e2sq * est2);
  return out;
}

Interval wald_interval(double estimate, double se, double level, Alternative alternative,
                       double min_q) {
  if (!(se >= 0.0)) throw std::domain_error("standard error must be non-negative");
  const double alpha = 1.0 - level;
  constexpr double inf = std::numeric_limits<double>::infinity();
  Interval ci{};
  switch (alternative) {
    case Alternative::TwoSided: {
      const double half = norm_quantile(1.0 - alpha / 2.0) * se;
      ci = {estimate - half, estimate + half};
      break;
    }
    case Alternative::Less:
      ci = {-inf, estimate + norm_quantile(1.0 - alpha) * se};
      break;
    case Alternative::Greater:
      ci = {estimate - norm_quantile(1.0 - alpha) * se, inf};
      break;
  }
  ci.lower = std::max(ci.lower, min_q);
  ci.upper = std::max(ci.upper, ci.lower);
  return ci;
}

double p_value(double z, Alternative alternative) noexcept {
  switch (alternative) {
    case Alternative::TwoSided: return std::min(1.0, 2.0 * norm_sf(std::abs(z)));
    case Alternative::Less: return norm_cdf(z);
    case Alternative::Greater: return norm_sf(z);
  }
  return 1.0;
}

WorkingEstimate working_estimate(const Sample& s, const MeasureSpec& spec,
                                 const TestOptions& opts) {
  const UnionGrid grid = union_grid(spec);
  const QuantileCov cov = qcov(s, grid.probs, opts.var_method, opts.quantile_type);
  const auto xhat = sample_quantiles(s, grid.probs, opts.quantile_type);
  const LinCombStats lc = lincomb_stats(cov, xhat, grid.b1, grid.b2);

  WorkingEstimate out;
  out.qdens_floored = cov.qdens_floored;
  if (spec.is_ratio()) {
    const RatioVariance rv = ratio_variance(lc.est1, *lc.est2, lc.v1, *lc.v2, *lc.v12);
    out.estimate = rv.ratio;
    if (opts.log_transf) {
      out.variance = rv.var_log();
      out.working = std::log(rv.ratio);
    } else {
      out.variance = rv.var_ratio;
      out.working = rv.ratio;
    }
  } else {
    out.estimate = lc.est1;
    out.working = lc.est1;
    out.variance = lc.v1;
    if (opts.log_transf) {
      if (!(lc.est1 > 0.0)) throw Error("log of non-positive estimate");
      out.working = std::log(lc.est1);
      out.variance = lc.v1 / (lc.est1 * lc.est1);
    }
  }
  out.variance = std::max(out.variance, 0.0);
  return out;
}

TestResult q_test_one(const Sample& s, const MeasureSpec& spec, const TestOptions& opts) {
  opts.validate();
  const WorkingEstimate w = working_estimate(s, spec, opts);

  TestResult r;
  r.method = "One sample test of the " + spec.title;
  if (opts.back_transf || !opts.log_transf) {
    r.estimate_label = spec.label;
  } else {
    r.estimate_label = "log " + spec.label;
  }
  r.null_value = opts.true_q;
  finish(r, w.working, std::sqrt(w.variance), working_null(opts, opts.true_q), opts);

  if (spec.is_ratio() && !opts.log_transf) r.warnings.emplace_back(kRatioWarning);
  if (w.qdens_floored) r.warnings.emplace_back(kFlooredWarning);
  r.hypothesis = hypothesis_sentence(r.estimate_label, opts.alternative, r.null_value);
  return r;
}

TestResult q_test_two(const Sample& x, const Sample& y, const MeasureSpec& spec,
                      const TestOptions& opts) {
  opts.validate();
  const WorkingEstimate wx = working_estimate(x, spec, opts);
  const WorkingEstimate wy = working_estimate(y, spec, opts);

  double true_q = opts.true_q;
  if (opts.back_transf && true_q == 0.0) true_q = 1.0;

  TestResult r;
  r.method = "Two sample test of the " + spec.title;
  r.data_name = "x and y";
  if (opts.back_transf) {
    r.estimate_label = "ratio of " + spec.plural;
  } else if (opts.log_transf) {
    r.estimate_label = "log ratio of " + spec.plural;
  } else {
    r.estimate_label = "difference in " + spec.plural;
  }
  r.null_value = true_q;

  const double working = wx.working - wy.working;
  const double se = std::sqrt(wx.variance + wy.variance);
  finish(r, working, se, working_null(opts, true_q), opts);

  if (spec.is_ratio() && !opts.log_transf) r.warnings.emplace_back(kRatioWarning);
  if (wx.qdens_floored || wy.qdens_floored) r.warnings.emplace_back(kFlooredWarning);
  r.hypothesis = hypothesis_sentence(r.estimate_label, opts.alternative, r.null_value);
  return r;
}

}  // namespace quantest
