#pragma once

#include "quantest/sample.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace quantest {

enum class KernelKind { Epanechnikov, Gaussian };

/// Symmetric probability kernel used by the direct quantile-density estimator.
struct Kernel {
  KernelKind kind = KernelKind::Epanechnikov;

  double operator()(double y) const noexcept;
  // Half-width of the support; the Gaussian is truncated at 5.
  double support() const noexcept;
  double second_moment() const noexcept;  // mu2(K)
  double roughness() const noexcept;      // R(K) = integral of K^2
  // (R(K) / mu2(K)^2)^(1/5); 15^(1/5) for Epanechnikov.
  double bandwidth_constant() const noexcept;
};

enum class QdMethodKind { Qor, DensityInversion };
enum class QorModel { Lognormal };

// Which lognormal sigma drives the QOR: the standard lognormal (sigma = 1)
// or sigma fitted to the log data by fit_lognormal_sigma.
enum class LognormalSigma { Standard, Fitted };

struct QdMethod {
  QdMethodKind kind = QdMethodKind::Qor;
  QorModel qor_model = QorModel::Lognormal;
  LognormalSigma sigma = LognormalSigma::Standard;
  bool bw_correct = true;
  Kernel kernel{};
};

/// q(p) / q''(p) for the lognormal quantile function exp(mu + sigma z_p).
///
/// mu cancels, leaving phi(z)^2 / ((sigma + z)^2 + z (sigma + z) + 1).
double qor_lognormal(double sigma, double p);

struct LognormalFit {
  double sigma;
  double shift;  // added to every value before taking logs
};

/// sd (divisor n - 1) of log(x + shift). The shift is 0 for strictly
/// positive data, else -min + (max - min) / n.
LognormalFit fit_lognormal_sigma(const Sample& s);

/// AMSE-optimal bandwidth C(K) |qor|^(2/5) n^(-1/5). With bw_correct the
/// result is clamped to min(p, 1 - p) and floored at 1/n.
double optimal_bandwidth(double qor_value, double p, std::size_t n, bool bw_correct,
                         const Kernel& kernel = {});

/// Direct kernel estimator of q(p) from the order statistics:
///   sum_i X_(i) [K_b(p - (i-1)/n) - K_b(p - i/n)],  K_b(y) = K(y/b)/b.
/// Evaluated in the equivalent spacing form so only the kernel window is visited.
double qdens_kernel(const Sample& s, double p, double bandwidth, const Kernel& kernel = {});

/// 1 / fhat(xhat_p) with a Gaussian KDE at Silverman's bandwidth.
double qdens_inversion(const Sample& s, double p, int type = kDefaultQuantileType);

struct QdEstimate {
  double value;
  double bandwidth;  // kernel bandwidth in probability units (QOR) or data units (inversion)
};

struct QdBatch {
  std::vector<QdEstimate> estimates;
  double qor_sigma = 1.0;  // sigma that drove the QOR (QOR method only)
  double shift = 0.0;      // lognormal fit shift (fitted sigma only)
};

/// Quantile density at each probability, one bandwidth per probability.
QdBatch quantile_densities(const Sample& s, std::span<const double> ps, const QdMethod& method,
                           int type = kDefaultQuantileType);

}  // namespace quantest
