#pragma once

#include "quantest/covariance.hpp"
#include "quantest/density.hpp"
#include "quantest/measures.hpp"
#include "quantest/sample.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace quantest {

enum class Alternative { TwoSided, Less, Greater };

std::string_view to_string(Alternative alt) noexcept;
/// Accepts "two.sided", "two_sided", "less", "greater".
Alternative parse_alternative(std::string_view text);

struct TestOptions {
  Alternative alternative = Alternative::TwoSided;
  double conf_level = 0.95;
  // Null value. On the log scale without back-transformation it is a log
  // value; with back-transformation it is on the original (ratio) scale.
  double true_q = 0.0;
  bool log_transf = false;
  bool back_transf = false;
  // Lower bound applied to the reported interval.
  double min_q = -std::numeric_limits<double>::infinity();
  int quantile_type = kDefaultQuantileType;
  QdMethod var_method{};

  void validate() const;
};

enum class Scale { Identity, Log, BackTransformedRatio };

std::string_view to_string(Scale scale) noexcept;

/// Outcome of a Wald test, laid out like an R htest record.
struct TestResult {
  std::string method;          // title line, e.g. "One sample test of the median"
  std::string data_name = "x";
  std::string estimate_label;  // e.g. "median", "ratio of Robust CVs"
  std::string hypothesis;      // e.g. "true median is not equal to 0"
  double estimate = 0.0;       // on the reported scale
  double se = 0.0;             // on the working scale (log scale when log_transf)
  double statistic = 0.0;      // Z on the working scale
  double p_value = 1.0;
  double conf_low = 0.0;
  double conf_high = 0.0;
  double conf_level = 0.95;
  double null_value = 0.0;     // on the reported scale
  Alternative alternative = Alternative::TwoSided;
  Scale scale = Scale::Identity;
  std::vector<std::string> warnings;
};

struct LinCombStats {
  double est1 = 0.0;
  double v1 = 0.0;
  std::optional<double> est2;
  std::optional<double> v2;
  std::optional<double> v12;
};

/// Quadratic forms b1' S b1, b2' S b2 and b1' S b2 with the point estimates
/// b1' xhat and b2' xhat. Coefficients are indexed like cov.probs.
LinCombStats lincomb_stats(const QuantileCov& cov, std::span<const double> xhat,
                           std::span<const double> b1, std::span<const double> b2 = {});

struct RatioVariance {
  double ratio = 0.0;
  double var_ratio = 0.0;

  /// var(log R) = var(R) / R^2. Throws quantest::Error when R <= 0.
  double var_log() const;
};

/// Delta-method variance of est1 / est2, in the expanded form
/// v1/e2^2 + e1^2 v2/e2^4 - 2 e1 v12/e2^3 so est1 = 0 is safe.
RatioVariance ratio_variance(double est1, double est2, double v1, double v2, double v12);

struct Interval {
  double lower;
  double upper;
};

Interval wald_interval(double estimate, double se, double level, Alternative alternative,
                       double min_q = -std::numeric_limits<double>::infinity());

double p_value(double z, Alternative alternative) noexcept;

/// (estimate - null) / se; +-inf when se is 0 and the estimate is off the null.
double z_statistic(double estimate, double null_value, double se) noexcept;

/// "true <label> is not equal to <null>", or "is less than"/"is greater than".
std::string hypothesis_sentence(std::string_view label, Alternative alt, double null_value);

/// Point estimate of a measure together with its variance on the working scale.
struct WorkingEstimate {
  double estimate = 0.0;  // original scale
  double working = 0.0;   // log(estimate) when log_transf, else estimate
  double variance = 0.0;  // variance of `working`
  bool qdens_floored = false;
};

WorkingEstimate working_estimate(const Sample& s, const MeasureSpec& spec,
                                 const TestOptions& opts);

TestResult q_test_one(const Sample& s, const MeasureSpec& spec, const TestOptions& opts = {});

/// Independent-samples comparison: difference on the identity scale, log
/// ratio on the log scale, ratio when back-transformed (where a zero true_q
/// is reset to 1).
TestResult q_test_two(const Sample& x, const Sample& y, const MeasureSpec& spec,
                      const TestOptions& opts = {});

}  // namespace quantest
