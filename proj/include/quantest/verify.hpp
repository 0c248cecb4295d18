#pragma once

#include "quantest/inequality.hpp"
#include "quantest/inference.hpp"
#include "quantest/measures.hpp"
#include "quantest/sample.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace quantest {

// Simulation harness backing the coverage and bootstrap checks.
//
// Every replicate r draws from its own std::mt19937_64 stream seeded with
// splitmix64(seed, r), so summaries do not depend on the thread schedule.
inline constexpr std::string_view kRngName = "mt19937_64 streams seeded by splitmix64(seed, index)";

enum class DistKind { Normal, Lognormal, Uniform, Exponential };

struct Distribution {
  DistKind kind = DistKind::Normal;
  // normal/lognormal: (mu, sigma); uniform: (lower, upper); exponential: (rate, unused)
  double a = 0.0;
  double b = 1.0;

  double quantile(double p) const;
  std::string describe() const;

  /// "normal", "lognormal:0,1", "uniform:0,1", "exponential:2".
  static Distribution parse(std::string_view text);
};

using SimMeasure = std::variant<MeasureSpec, InequalitySpec>;

struct SimConfig {
  Distribution dist{};
  std::size_t n = 100;
  std::size_t reps = 1000;
  SimMeasure measure = MeasureSpec{};
  TestOptions options{};  // measure tests; inequality specs carry their own options
  std::uint64_t seed = 1;
  unsigned threads = 0;   // 0 = hardware concurrency
};

struct CoverageResult {
  double coverage = 0.0;
  double avg_width = 0.0;
  double mc_se = 0.0;
  double true_value = 0.0;
  std::size_t reps = 0;
  std::size_t failures = 0;  // replicates whose test threw; counted as not covering
};

struct BootstrapResult {
  double se = 0.0;
  double mean = 0.0;
  std::size_t B = 0;
  std::size_t failures = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Generator for replicate `index` of a run seeded with `seed`.
std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index);

/// Uniform on the open interval (0, 1) with 53-bit resolution.
double open_uniform(std::mt19937_64& gen) noexcept;

/// n draws by inversion of the distribution's quantile function.
std::vector<double> draw(const Distribution& dist, std::size_t n, std::mt19937_64& gen);

/// Population value of the measure, on the scale the test reports.
double true_value(const Distribution& dist, const SimMeasure& measure, const TestOptions& options);

/// Population QRI or G2 by adaptive Gauss-Kronrod quadrature.
double population_inequality(const Distribution& dist, IneqKind kind);

CoverageResult coverage_sim(const SimConfig& cfg);

/// Standard deviation of B nonparametric bootstrap estimates. Throws
/// quantest::Error when more than 5% of resamples fail to produce an estimate.
BootstrapResult bootstrap_se(const Sample& s, const SimMeasure& measure, std::size_t B,
                             std::uint64_t seed, int type = kDefaultQuantileType,
                             unsigned threads = 0);

/// Classical Gini coefficient (mean absolute difference / twice the mean).
double gini_coefficient(const Sample& s);

}  // namespace quantest
