#include "quantest/normal.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace quantest {

double norm_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double norm_sf(double z) noexcept { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal quantile requires 0 < p < 1");
  }
  static const boost::math::normal_distribution<double> standard{0.0, 1.0};
  return boost::math::quantile(standard, p);
}

}  // namespace quantest
