#pragma once

#include "quantest/sample.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace quantest {

/// A linear combination of quantiles, optionally divided by a second one.
///
/// Numerator: sum coef[i] Q(u[i]). Denominator (ratio measures only):
/// sum coef2[j] Q(u2[j]). An empty coef2 means "not a ratio".
struct MeasureSpec {
  std::vector<double> u;
  std::vector<double> coef;
  std::vector<double> u2;
  std::vector<double> coef2;

  std::string name = "user";       // registry key, or "user" for custom specs
  std::string title = "user-defined measure";
  std::string label = "measure";   // singular, e.g. "median"
  std::string plural = "measures"; // e.g. "medians", used in two-sample text
  std::optional<double> tail_p;

  bool is_ratio() const noexcept { return !coef2.empty(); }

  /// Throws std::invalid_argument / std::domain_error on an inconsistent spec.
  void validate() const;

  /// Custom measure from vectors. An empty coef means all ones. A non-empty
  /// coef2 with empty u2 reuses u for the denominator.
  static MeasureSpec from_vectors(std::vector<double> u, std::vector<double> coef = {},
                                  std::vector<double> u2 = {}, std::vector<double> coef2 = {});

  /// Custom ratio from a 2 x d coefficient matrix over shared probabilities:
  /// first row numerator, second row denominator.
  static MeasureSpec from_matrix(std::vector<double> u,
                                 const std::vector<std::vector<double>>& rows);
};

/// Registered measure names, in display order. "qrXXYY" stands for the pattern.
std::span<const std::string_view> measure_names() noexcept;

/// Looks up a named measure; `p` sets the tail parameter where one exists
/// (bowley, groenR, groenL, lqw in (0, 0.5); rqw in (0.5, 1)).
MeasureSpec resolve_measure(std::string_view name, std::optional<double> p = std::nullopt);

/// Numerator and denominator coefficients re-indexed onto the sorted,
/// de-duplicated union of u and u2, so both share one covariance matrix.
struct UnionGrid {
  std::vector<double> probs;
  std::vector<double> b1;
  std::vector<double> b2;  // empty unless the spec is a ratio
};

UnionGrid union_grid(const MeasureSpec& spec);

/// Value of the measure given quantiles on the union grid.
double combine_quantiles(const UnionGrid& grid, std::span<const double> quantiles);

/// Value of the measure for an arbitrary quantile function (population values).
double evaluate_measure(const MeasureSpec& spec, const std::function<double(double)>& quantile);

double estimate_measure(const Sample& s, const MeasureSpec& spec,
                        int type = kDefaultQuantileType);

}  // namespace quantest
