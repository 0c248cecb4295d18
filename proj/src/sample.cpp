#include "quantest/sample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace quantest {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("empty sample");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("sample contains a non-finite value");
    }
  }
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
}

namespace {

// Plotting-position constants (a, b) from Hyndman & Fan: h = a + p (n + 1 - a - b).
struct PlottingPosition {
  double a;
  double b;
};

PlottingPosition plotting_position(int type) {
  switch (type) {
    case 4: return {0.0, 1.0};
    case 5: return {0.5, 0.5};
    case 6: return {0.0, 0.0};
    case 7: return {1.0, 1.0};
    case 8: return {1.0 / 3.0, 1.0 / 3.0};
    case 9: return {3.0 / 8.0, 3.0 / 8.0};
    default:
      throw std::invalid_argument("unsupported quantile type " + std::to_string(type) +
                                  " (supported: 4..9)");
  }
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double p, int type) {
  if (sorted.empty()) {
    throw std::invalid_argument("empty sample");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("probability must lie in [0, 1]");
  }
  const auto [a, b] = plotting_position(type);
  const auto n = static_cast<double>(sorted.size());
  constexpr double fuzz = 4.0 * std::numeric_limits<double>::epsilon();

  // n p + m with m = a + p (1 - a - b); keeps h exact at p = 0.5 for types 5, 8, 9
  const double h = std::clamp(n * p + (a + p * (1.0 - a - b)), 1.0, n);
  const double k = std::floor(h + fuzz);
  double gamma = h - k;
  if (std::abs(gamma) < fuzz) gamma = 0.0;

  // Order statistics are 1-based in the formula.
  const auto lo = static_cast<std::size_t>(k) - 1;
  if (lo + 1 >= sorted.size() || gamma == 0.0) {
    return sorted[std::min(lo, sorted.size() - 1)];
  }
  return sorted[lo] + gamma * (sorted[lo + 1] - sorted[lo]);
}

double sample_quantile(const Sample& s, double p, int type) {
  return quantile_sorted(s.sorted(), p, type);
}

std::vector<double> sample_quantiles(const Sample& s, std::span<const double> ps, int type) {
  std::vector<double> out;
  out.reserve(ps.size());
  for (double p : ps) out.push_back(sample_quantile(s, p, type));
  return out;
}

}  // namespace quantest
