#pragma once

// Reference implementations written straight from the textbook definitions.
// They are deliberately slow and share no code with the library.

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

inline double Phi(double z) { return boost::math::cdf(boost::math::normal(), z); }

inline double z_of(double p) { return boost::math::quantile(boost::math::normal(), p); }

// Hyndman-Fan type 8 via plotting positions p_k = (k - 1/3) / (n + 1/3):
// piecewise linear through (p_k, x_(k)), flat outside [p_1, p_n].
inline double type8(std::vector<double> x, double p) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  auto pos = [n](std::size_t k) { return (static_cast<double>(k) - 1.0 / 3.0) / (n + 1.0 / 3.0); };
  if (p <= pos(1)) return x.front();
  if (p >= pos(x.size())) return x.back();
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double lo = pos(k), hi = pos(k + 1);
    if (p >= lo && p <= hi) {
      const double w = (p - lo) / (hi - lo);
      return x[k - 1] + w * (x[k] - x[k - 1]);
    }
  }
  return x.back();
}

inline double epanechnikov(double y) { return std::abs(y) <= 1.0 ? 0.75 * (1.0 - y * y) : 0.0; }

// The estimator as a plain sum over every order statistic.
inline double qdens_sum(std::vector<double> x, double p, double b,
                        const std::function<double(double)>& K = epanechnikov) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  auto Kb = [&](double y) { return K(y / b) / b; };
  double total = 0.0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    const double di = static_cast<double>(i);
    total += x[i - 1] * (Kb(p - (di - 1.0) / n) - Kb(p - di / n));
  }
  return total;
}

inline double lognormal_quantile(double mu, double sigma, double p) {
  return std::exp(mu + sigma * z_of(p));
}

// q = Q' in closed form; q'' by a central second difference of q.
inline double lognormal_q(double mu, double sigma, double p) {
  return sigma * lognormal_quantile(mu, sigma, p) / phi(z_of(p));
}

inline double qor_fd(double mu, double sigma, double p) {
  const double h = 1e-3 * std::min(p, 1.0 - p);
  const double q0 = lognormal_q(mu, sigma, p);
  const double d2 = (lognormal_q(mu, sigma, p + h) - 2.0 * q0 + lognormal_q(mu, sigma, p - h)) / (h * h);
  return q0 / d2;
}

// Composite Simpson on [a, b] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m) {
  if (m % 2 != 0) ++m;
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// 1 - integral of Q(p/2)/Q(1-p/2); for the lognormal the ratio is exp(2 sigma z_{p/2}).
inline double lognormal_qri_quadrature(double sigma) {
  auto ratio = [sigma](double p) { return p <= 0.0 ? 0.0 : std::exp(2.0 * sigma * z_of(p / 2.0)); };
  return 1.0 - simpson(ratio, 0.0, 1.0, 200000);
}

inline double lognormal_g2_quadrature(double sigma) {
  auto ratio = [sigma](double p) {
    return p <= 0.0 ? 0.0 : p * std::exp(2.0 * sigma * z_of(p / 2.0));
  };
  return 1.0 - 2.0 * simpson(ratio, 0.0, 1.0, 200000);
}

inline double lognormal_qri_closed(double sigma) {
  return 1.0 - 2.0 * std::exp(2.0 * sigma * sigma) * Phi(-2.0 * sigma);
}

}  // namespace oracle
