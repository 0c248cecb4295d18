#include "quantest/density.hpp"

#include "quantest/error.hpp"
#include "quantest/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace quantest {

double Kernel::operator()(double y) const noexcept {
  switch (kind) {
    case KernelKind::Epanechnikov:
      return std::abs(y) < 1.0 ? 0.75 * (1.0 - y * y) : 0.0;
    case KernelKind::Gaussian:
      return std::abs(y) <= 5.0 ? norm_pdf(y) : 0.0;
  }
  return 0.0;
}

double Kernel::support() const noexcept {
  return kind == KernelKind::Epanechnikov ? 1.0 : 5.0;
}

double Kernel::second_moment() const noexcept {
  return kind == KernelKind::Epanechnikov ? 0.2 : 1.0;
}

double Kernel::roughness() const noexcept {
  return kind == KernelKind::Epanechnikov ? 0.6 : 0.5 / std::sqrt(std::numbers::pi);
}

double Kernel::bandwidth_constant() const noexcept {
  const double mu2 = second_moment();
  return std::pow(roughness() / (mu2 * mu2), 0.2);
}

double qor_lognormal(double sigma, double p) {
  if (!(sigma > 0.0)) throw std::domain_error("lognormal QOR requires sigma > 0");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("lognormal QOR requires 0 < p < 1");
  const double z = norm_quantile(p);
  const double phi = norm_pdf(z);
  const double t = sigma + z;
  return phi * phi / (t * t + z * t + 1.0);
}

LognormalFit fit_lognormal_sigma(const Sample& s) {
  const std::size_t n = s.size();
  if (n < 2) throw std::invalid_argument("lognormal fit needs at least two observations");
  const double lo = s.min();
  const double hi = s.max();
  if (hi == lo) throw Error("degenerate sample");

  const double shift = lo > 0.0 ? 0.0 : -lo + (hi - lo) / static_cast<double>(n);
  std::vector<double> logs;
  logs.reserve(n);
  for (double v : s.values()) logs.push_back(std::log(v + shift));
  const double mean = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double l : logs) ss += (l - mean) * (l - mean);
  const double sigma = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sigma > 0.0)) throw Error("degenerate sample");
  return {sigma, shift};
}

double optimal_bandwidth(double qor_value, double p, std::size_t n, bool bw_correct,
                         const Kernel& kernel) {
  if (n < 2) throw std::invalid_argument("bandwidth selection needs n >= 2");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("bandwidth selection requires 0 < p < 1");
  const double nd = static_cast<double>(n);
  const double raw =
      kernel.bandwidth_constant() * std::pow(std::abs(qor_value), 0.4) * std::pow(nd, -0.2);
  if (!bw_correct) return raw;
  return std::max(std::min({raw, p, 1.0 - p}), 1.0 / nd);
}

double qdens_kernel(const Sample& s, double p, double bandwidth, const Kernel& kernel) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile density requires 0 < p < 1");
  if (!(bandwidth > 0.0 && bandwidth < 1.0)) {
    throw std::domain_error("bandwidth must lie in (0, 1)");
  }
  const auto x = s.sorted();
  const std::size_t n = x.size();
  const double nd = static_cast<double>(n);
  const auto kb = [&](double y) { return kernel(y / bandwidth) / bandwidth; };

  // sum_i X_(i)[K_b(p-(i-1)/n) - K_b(p-i/n)]
  //   = X_(1) K_b(p) + sum_{j=1}^{n-1} (X_(j+1) - X_(j)) K_b(p - j/n) - X_(n) K_b(p - 1)
  double total = x.front() * kb(p) - x.back() * kb(p - 1.0);
  if (n < 2) return total;

  const double reach = kernel.support() * bandwidth;
  const auto first = static_cast<std::size_t>(std::max(1.0, std::floor((p - reach) * nd)));
  const auto last = static_cast<std::size_t>(
      std::min(nd - 1.0, std::ceil((p + reach) * nd)));
  for (std::size_t j = first; j <= last; ++j) {
    const double spacing = x[j] - x[j - 1];
    if (spacing != 0.0) total += spacing * kb(p - static_cast<double>(j) / nd);
  }
  return total;
}

double qdens_inversion(const Sample& s, double p, int type) {
  const std::size_t n = s.size();
  if (n < 2) throw std::invalid_argument("density inversion needs n >= 2");
  const auto values = s.values();
  const double nd = static_cast<double>(n);

  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / nd;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (nd - 1.0));
  const double iqr = sample_quantile(s, 0.75, 7) - sample_quantile(s, 0.25, 7);
  double spread = std::min(sd, iqr / 1.349);
  if (!(spread > 0.0)) spread = sd;
  if (!(spread > 0.0)) throw Error("degenerate sample: zero density bandwidth");
  const double h = 0.9 * spread * std::pow(nd, -0.2);

  const double xp = sample_quantile(s, p, type);
  double dens = 0.0;
  for (double v : values) dens += norm_pdf((xp - v) / h);
  dens /= nd * h;
  if (!(dens > 0.0)) throw Error("zero density at quantile");
  return 1.0 / dens;
}

QdBatch quantile_densities(const Sample& s, std::span<const double> ps, const QdMethod& method,
                           int type) {
  QdBatch batch;
  batch.estimates.reserve(ps.size());
  if (method.kind == QdMethodKind::DensityInversion) {
    for (double p : ps) batch.estimates.push_back({qdens_inversion(s, p, type), 0.0});
    return batch;
  }

  if (method.sigma == LognormalSigma::Fitted) {
    const auto fit = fit_lognormal_sigma(s);
    batch.qor_sigma = fit.sigma;
    batch.shift = fit.shift;
  }
  for (double p : ps) {
    const double qor = qor_lognormal(batch.qor_sigma, p);
    const double b = optimal_bandwidth(qor, p, s.size(), method.bw_correct, method.kernel);
    batch.estimates.push_back({qdens_kernel(s, p, b, method.kernel), b});
  }
  return batch;
}

}  // namespace quantest
