#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace quantest {

inline constexpr int kDefaultQuantileType = 8;

/// An immutable collection of finite observations with a cached ascending copy.
///
/// Construction rejects empty input and any NaN or infinite value.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> sorted() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }
  double min() const noexcept { return sorted_.front(); }
  double max() const noexcept { return sorted_.back(); }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
};

/// Sample quantile of Hyndman-Fan type 4..9 on already-sorted data.
///
/// For type 8 the plotting position is h = (n + 1/3) p + 1/3 clamped to
/// [1, n]; the result interpolates linearly between the bracketing order
/// statistics. Accepts p in the closed interval [0, 1].
double quantile_sorted(std::span<const double> sorted, double p,
                       int type = kDefaultQuantileType);

double sample_quantile(const Sample& s, double p, int type = kDefaultQuantileType);

std::vector<double> sample_quantiles(const Sample& s, std::span<const double> ps,
                                     int type = kDefaultQuantileType);

}  // namespace quantest
