#include "quantest/inequality.hpp"

#include "quantest/covariance.hpp"
#include "quantest/error.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quantest {

namespace {

void require_positive(const Sample& s, IneqKind kind) {
  if (!(s.min() > 0.0)) throw Error(std::string(to_string(kind)) + " requires positive data");
}

void check_J(int J) {
  if (J < 2) throw std::invalid_argument("J must be at least 2");
}

// Symmetric-quantile pairs Q(p_i/2), Q(1 - p_i/2).
struct QuantilePairs {
  std::vector<double> probs;  // lower probabilities then upper probabilities
  std::vector<double> lower;
  std::vector<double> upper;
};

QuantilePairs quantile_pairs(const Sample& s, int J, int type) {
  const auto grid = inequality_grid(J);
  QuantilePairs out;
  out.probs.reserve(2 * grid.size());
  for (double p : grid) out.probs.push_back(p / 2.0);
  for (double p : grid) out.probs.push_back(1.0 - p / 2.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.lower.push_back(sample_quantile(s, out.probs[i], type));
    out.upper.push_back(sample_quantile(s, out.probs[grid.size() + i], type));
  }
  return out;
}

double combine(IneqKind kind, std::span<const double> lower, std::span<const double> upper) {
  const auto J = lower.size();
  const double Jd = static_cast<double>(J);
  double total = 0.0;
  if (kind == IneqKind::QRI) {
    for (std::size_t i = 0; i < J; ++i) total += 1.0 - lower[i] / upper[i];
    return total / Jd;
  }
  // (2/J) sum p_i = 1 on the midpoint grid, so this equals 1 - (2/J) sum p_i r_i
  // and is exactly 0 when every ratio is 1.
  for (std::size_t i = 0; i < J; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / Jd;
    total += p * (1.0 - lower[i] / upper[i]);
  }
  return 2.0 * total / Jd;
}

}  // namespace

std::string_view to_string(IneqKind kind) noexcept {
  return kind == IneqKind::QRI ? "QRI" : "G2";
}

IneqKind parse_ineq_kind(std::string_view text) {
  if (text == "QRI") return IneqKind::QRI;
  if (text == "G2") return IneqKind::G2;
  throw std::invalid_argument("inequality measure must be QRI or G2");
}

void InequalitySpec::validate() const {
  check_J(J);
  if (!(conf_level > 0.0 && conf_level < 1.0)) {
    throw std::domain_error("confidence level must lie in (0, 1)");
  }
}

std::vector<double> inequality_grid(int J) {
  check_J(J);
  std::vector<double> grid(static_cast<std::size_t>(J));
  for (int i = 0; i < J; ++i) grid[static_cast<std::size_t>(i)] = (i + 0.5) / J;
  return grid;
}

double ineq_estimate(const Sample& s, IneqKind kind, int J, int type) {
  check_J(J);
  require_positive(s, kind);
  const auto pairs = quantile_pairs(s, J, type);
  return combine(kind, pairs.lower, pairs.upper);
}

double qri_estimate(const Sample& s, int J, int type) {
  return ineq_estimate(s, IneqKind::QRI, J, type);
}

double g2_estimate(const Sample& s, int J, int type) {
  return ineq_estimate(s, IneqKind::G2, J, type);
}

std::vector<double> ineq_gradient(IneqKind kind, std::span<const double> lower,
                                  std::span<const double> upper) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw std::invalid_argument("lower and upper quantiles must be non-empty and equal length");
  }
  const auto J = lower.size();
  const double Jd = static_cast<double>(J);
  std::vector<double> g(2 * J);
  for (std::size_t i = 0; i < J; ++i) {
    const double weight = kind == IneqKind::QRI ? 1.0 : 2.0 * (static_cast<double>(i) + 0.5) / Jd;
    g[i] = -weight / (Jd * upper[i]);
    g[J + i] = weight * lower[i] / (Jd * upper[i] * upper[i]);
  }
  return g;
}

IneqStats ineq_stats(const Sample& s, const InequalitySpec& spec) {
  spec.validate();
  require_positive(s, spec.kind);
  const auto pairs = quantile_pairs(s, spec.J, spec.quantile_type);
  const QuantileCov cov = qcov(s, pairs.probs, spec.var_method, spec.quantile_type);
  const auto g = ineq_gradient(spec.kind, pairs.lower, pairs.upper);

  double var = 0.0;
  const auto d = g.size();
  for (std::size_t i = 0; i < d; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += cov(i, j) * g[j];
    var += g[i] * row;
  }
  return {combine(spec.kind, pairs.lower, pairs.upper), std::max(var, 0.0), cov.qdens_floored};
}

double ineq_variance(const Sample& s, const InequalitySpec& spec) {
  return ineq_stats(s, spec).variance;
}

TestResult qineq_test(const Sample& x, const std::optional<Sample>& y, const InequalitySpec& spec) {
  spec.validate();
  const std::string kind(to_string(spec.kind));
  const IneqStats sx = ineq_stats(x, spec);

  TestResult r;
  double estimate = sx.estimate;
  double variance = sx.variance;
  bool floored = sx.qdens_floored;
  if (y) {
    const IneqStats sy = ineq_stats(*y, spec);
    estimate -= sy.estimate;
    variance += sy.variance;
    floored = floored || sy.qdens_floored;
    r.method = "Two sample test of the " + kind;
    r.data_name = "x and y";
    r.estimate_label = "difference in " + kind;
    r.null_value = spec.true_ineq.value_or(0.0);
  } else {
    r.method = "One sample test of the " + kind;
    r.estimate_label = kind;
    r.null_value = spec.true_ineq.value_or(0.5);
  }

  const double se = std::sqrt(variance);
  const Interval ci = wald_interval(estimate, se, spec.conf_level, spec.alternative);

  r.estimate = estimate;
  r.se = se;
  r.statistic = z_statistic(estimate, r.null_value, se);
  r.p_value = p_value(r.statistic, spec.alternative);
  r.conf_low = ci.lower;
  r.conf_high = ci.upper;
  r.conf_level = spec.conf_level;
  r.alternative = spec.alternative;
  r.scale = Scale::Identity;

  r.hypothesis = hypothesis_sentence(r.estimate_label, spec.alternative, r.null_value);
  if (floored) {
    r.warnings.emplace_back(
        "A quantile density estimate was not positive and was floored; the standard error "
        "may be unreliable.");
  }
  return r;
}

}  // namespace quantest
