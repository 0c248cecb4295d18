#pragma once

#include "quantest/inference.hpp"
#include "quantest/sample.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace quantest {

enum class IneqKind { QRI, G2 };

std::string_view to_string(IneqKind kind) noexcept;
/// Accepts "QRI" or "G2".
IneqKind parse_ineq_kind(std::string_view text);

struct InequalitySpec {
  IneqKind kind = IneqKind::QRI;
  int J = 100;
  // Null value; defaults to 0.5 for one sample and to a zero difference for two.
  std::optional<double> true_ineq;
  Alternative alternative = Alternative::TwoSided;
  double conf_level = 0.95;
  int quantile_type = kDefaultQuantileType;
  QdMethod var_method{};

  void validate() const;
};

/// Midpoint grid p_i = (i - 0.5) / J, i = 1..J.
std::vector<double> inequality_grid(int J);

/// (1/J) sum [1 - Q(p_i/2) / Q(1 - p_i/2)].
double qri_estimate(const Sample& s, int J = 100, int type = kDefaultQuantileType);

/// 1 - (2/J) sum p_i Q(p_i/2) / Q(1 - p_i/2).
double g2_estimate(const Sample& s, int J = 100, int type = kDefaultQuantileType);

double ineq_estimate(const Sample& s, IneqKind kind, int J, int type = kDefaultQuantileType);

/// Gradient of the index with respect to the 2J quantiles, ordered as
/// lower[0..J) then upper[0..J), where lower[i] = Q(p_i/2), upper[i] = Q(1 - p_i/2).
std::vector<double> ineq_gradient(IneqKind kind, std::span<const double> lower,
                                  std::span<const double> upper);

struct IneqStats {
  double estimate = 0.0;
  double variance = 0.0;
  bool qdens_floored = false;
};

/// Point estimate plus delta-method variance g' S g over the 2J-point covariance.
IneqStats ineq_stats(const Sample& s, const InequalitySpec& spec);

double ineq_variance(const Sample& s, const InequalitySpec& spec);

TestResult qineq_test(const Sample& x, const std::optional<Sample>& y, const InequalitySpec& spec);

}  // namespace quantest
