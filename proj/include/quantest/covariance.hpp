#pragma once

#include "quantest/density.hpp"
#include "quantest/sample.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace quantest {

/// Estimated covariance matrix of quantile estimators, labelled by the
/// probabilities in the order the caller requested them.
///
/// Entry (i, j) with p_i <= p_j is p_i (1 - p_j) q(p_i) q(p_j) / n.
struct QuantileCov {
  std::vector<double> probs;
  std::vector<double> qdens;       // quantile density used for each row
  std::vector<double> bandwidths;  // bandwidth behind each qdens entry
  std::vector<double> entries;     // row-major, probs.size()^2
  std::size_t n = 0;
  QdMethod method{};
  double qor_sigma = 1.0;
  double shift = 0.0;
  // Set when some qdens estimate was <= 0 and was floored to keep the matrix PSD.
  bool qdens_floored = false;

  std::size_t dim() const noexcept { return probs.size(); }
  double operator()(std::size_t i, std::size_t j) const { return entries[i * dim() + j]; }
};

/// Covariance of the quantile estimators at `us`. Duplicate probabilities are
/// estimated once and mirrored. Throws quantest::Error on a zero-spread sample.
QuantileCov qcov(const Sample& s, std::span<const double> us, const QdMethod& method = {},
                 int type = kDefaultQuantileType);

}  // namespace quantest
