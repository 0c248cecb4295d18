#include "quantest/covariance.hpp"

#include "quantest/error.hpp"

#include <algorithm>
#include <stdexcept>

namespace quantest {

QuantileCov qcov(const Sample& s, std::span<const double> us, const QdMethod& method, int type) {
  if (us.empty()) throw std::invalid_argument("qcov needs at least one probability");
  for (double u : us) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("qcov probabilities must lie in (0, 1)");
  }
  if (s.max() == s.min()) throw Error("degenerate sample");

  std::vector<double> unique(us.begin(), us.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  const QdBatch batch = quantile_densities(s, unique, method, type);
  const double floor_value = 1e-12 * (s.max() - s.min());

  QuantileCov out;
  out.probs.assign(us.begin(), us.end());
  out.n = s.size();
  out.method = method;
  out.qor_sigma = batch.qor_sigma;
  out.shift = batch.shift;

  const auto d = us.size();
  out.qdens.resize(d);
  out.bandwidths.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto k = static_cast<std::size_t>(
        std::lower_bound(unique.begin(), unique.end(), us[i]) - unique.begin());
    double q = batch.estimates[k].value;
    if (!(q > 0.0)) {
      q = floor_value;
      out.qdens_floored = true;
    }
    out.qdens[i] = q;
    out.bandwidths[i] = batch.estimates[k].bandwidth;
  }

  const double nd = static_cast<double>(out.n);
  out.entries.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const double lo = std::min(out.probs[i], out.probs[j]);
      const double hi = std::max(out.probs[i], out.probs[j]);
      const double v = lo * (1.0 - hi) * out.qdens[i] * out.qdens[j] / nd;
      out.entries[i * d + j] = v;
      out.entries[j * d + i] = v;
    }
  }
  return out;
}

}  // namespace quantest
