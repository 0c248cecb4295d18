#include "quantest/verify.hpp"

#include "quantest/error.hpp"
#include "quantest/normal.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace quantest {

namespace {

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

// Runs body(i) for i in [0, jobs) across workers; each index is visited once.
template <class Body>
void parallel_for(std::size_t jobs, unsigned threads, Body body) {
  const unsigned workers = worker_count(threads, jobs);
  if (workers == 1) {
    for (std::size_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([=, &body] {
      for (std::size_t i = w; i < jobs; i += workers) body(i);
    });
  }
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad distribution parameter '" + std::string(text) + "'");
  }
  return v;
}

double sd_of(const std::vector<double>& v, double& mean_out) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  mean_out = mean;
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

double Distribution::quantile(double p) const {
  switch (kind) {
    case DistKind::Normal: return a + b * norm_quantile(p);
    case DistKind::Lognormal: return std::exp(a + b * norm_quantile(p));
    case DistKind::Uniform: return a + (b - a) * p;
    case DistKind::Exponential: return -std::log1p(-p) / a;
  }
  return 0.0;
}

std::string Distribution::describe() const {
  std::ostringstream os;
  switch (kind) {
    case DistKind::Normal: os << "normal(" << a << "," << b << ")"; break;
    case DistKind::Lognormal: os << "lognormal(" << a << "," << b << ")"; break;
    case DistKind::Uniform: os << "uniform(" << a << "," << b << ")"; break;
    case DistKind::Exponential: os << "exponential(" << a << ")"; break;
  }
  return os.str();
}

Distribution Distribution::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      params.push_back(parse_double(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  Distribution d;
  std::size_t expected = 2;
  if (name == "normal") {
    d = {DistKind::Normal, 0.0, 1.0};
  } else if (name == "lognormal") {
    d = {DistKind::Lognormal, 0.0, 1.0};
  } else if (name == "uniform") {
    d = {DistKind::Uniform, 0.0, 1.0};
  } else if (name == "exponential") {
    d = {DistKind::Exponential, 1.0, 0.0};
    expected = 1;
  } else {
    throw std::invalid_argument("unknown distribution '" + std::string(name) +
                                "' (normal, lognormal, uniform, exponential)");
  }
  if (!params.empty()) {
    if (params.size() != expected) {
      throw std::invalid_argument("wrong number of parameters for " + std::string(name));
    }
    d.a = params[0];
    if (expected == 2) d.b = params[1];
  }
  const bool ok = (d.kind == DistKind::Uniform && d.b > d.a) ||
                  (d.kind == DistKind::Exponential && d.a > 0.0) ||
                  ((d.kind == DistKind::Normal || d.kind == DistKind::Lognormal) && d.b > 0.0);
  if (!ok) throw std::domain_error("invalid parameters for " + std::string(name));
  return d;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

double open_uniform(std::mt19937_64& gen) noexcept {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> draw(const Distribution& dist, std::size_t n, std::mt19937_64& gen) {
  std::vector<double> out(n);
  for (auto& v : out) v = dist.quantile(open_uniform(gen));
  return out;
}

double population_inequality(const Distribution& dist, IneqKind kind) {
  if (!(dist.quantile(1e-12) > 0.0)) {
    throw std::domain_error(std::string(to_string(kind)) + " requires a positive distribution");
  }
  const auto integrand = [&](double p) {
    if (p <= 0.0) return 0.0;
    const double ratio = dist.quantile(p / 2.0) / dist.quantile(1.0 - p / 2.0);
    return kind == IneqKind::QRI ? ratio : p * ratio;
  };
  using boost::math::quadrature::gauss_kronrod;
  const double integral = gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-12);
  return kind == IneqKind::QRI ? 1.0 - integral : 1.0 - 2.0 * integral;
}

double true_value(const Distribution& dist, const SimMeasure& measure, const TestOptions& options) {
  if (const auto* ineq = std::get_if<InequalitySpec>(&measure)) {
    return population_inequality(dist, ineq->kind);
  }
  const auto& spec = std::get<MeasureSpec>(measure);
  const double theta = evaluate_measure(spec, [&](double p) { return dist.quantile(p); });
  if (options.log_transf && !options.back_transf) return std::log(theta);
  return theta;
}

CoverageResult coverage_sim(const SimConfig& cfg) {
  if (cfg.reps < 100) throw std::invalid_argument("coverage simulation needs reps >= 100");
  if (cfg.n < 2) throw std::invalid_argument("coverage simulation needs n >= 2");
  const double target = true_value(cfg.dist, cfg.measure, cfg.options);
  // The null does not affect coverage; pinning it to the target keeps it valid on every scale.
  TestOptions options = cfg.options;
  options.true_q = target;
  SimMeasure measure = cfg.measure;
  if (auto* ineq = std::get_if<InequalitySpec>(&measure)) ineq->true_ineq = target;

  struct Outcome {
    bool covered = false;
    bool failed = false;
    double width = 0.0;
  };
  std::vector<Outcome> outcomes(cfg.reps);
  parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
    auto gen = stream_for(cfg.seed, r);
    Outcome& out = outcomes[r];
    try {
      const Sample s(draw(cfg.dist, cfg.n, gen));
      TestResult res;
      if (const auto* ineq = std::get_if<InequalitySpec>(&measure)) {
        res = qineq_test(s, std::nullopt, *ineq);
      } else {
        res = q_test_one(s, std::get<MeasureSpec>(measure), options);
      }
      out.covered = res.conf_low <= target && target <= res.conf_high;
      out.width = res.conf_high - res.conf_low;
    } catch (const std::exception&) {
      out.failed = true;
    }
  });

  CoverageResult result;
  result.true_value = target;
  result.reps = cfg.reps;
  std::size_t covered = 0;
  double width = 0.0;
  for (const auto& o : outcomes) {
    if (o.failed) {
      ++result.failures;
      continue;
    }
    covered += o.covered ? 1 : 0;
    width += o.width;
  }
  const double reps = static_cast<double>(cfg.reps);
  result.coverage = static_cast<double>(covered) / reps;
  const std::size_t ok = cfg.reps - result.failures;
  result.avg_width = ok > 0 ? width / static_cast<double>(ok)
                            : std::numeric_limits<double>::quiet_NaN();
  result.mc_se = std::sqrt(result.coverage * (1.0 - result.coverage) / reps);
  return result;
}

BootstrapResult bootstrap_se(const Sample& s, const SimMeasure& measure, std::size_t B,
                             std::uint64_t seed, int type, unsigned threads) {
  if (B < 500) throw std::invalid_argument("bootstrap needs B >= 500");
  const auto values = s.values();
  const std::size_t n = values.size();

  std::vector<double> estimates(B, std::numeric_limits<double>::quiet_NaN());
  parallel_for(B, threads, [&](std::size_t b) {
    auto gen = stream_for(seed, b);
    std::vector<double> resample(n);
    for (auto& v : resample) {
      const auto idx = static_cast<std::size_t>(open_uniform(gen) * static_cast<double>(n));
      v = values[std::min(idx, n - 1)];
    }
    try {
      const Sample rs(std::move(resample));
      if (const auto* ineq = std::get_if<InequalitySpec>(&measure)) {
        estimates[b] = ineq_estimate(rs, ineq->kind, ineq->J, type);
      } else {
        estimates[b] = estimate_measure(rs, std::get<MeasureSpec>(measure), type);
      }
    } catch (const std::exception&) {
      // left as NaN and counted below
    }
  });

  BootstrapResult result;
  result.B = B;
  std::vector<double> good;
  good.reserve(B);
  for (double e : estimates) {
    if (std::isfinite(e)) {
      good.push_back(e);
    } else {
      ++result.failures;
    }
  }
  if (static_cast<double>(result.failures) > 0.05 * static_cast<double>(B) || good.size() < 2) {
    throw Error("bootstrap estimator failed on more than 5% of resamples");
  }
  result.se = sd_of(good, result.mean);
  return result;
}

double gini_coefficient(const Sample& s) {
  const auto x = s.sorted();
  const double n = static_cast<double>(x.size());
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += x[i];
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * x[i];
  }
  if (total == 0.0) throw Error("Gini coefficient undefined for a zero-sum sample");
  return weighted / (n * total);
}

}  // namespace quantest
