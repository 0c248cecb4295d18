#include "quantest/measures.hpp"

#include "quantest/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

namespace quantest {

namespace {

void check_probabilities(std::span<const double> ps, const char* what) {
  for (double p : ps) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::domain_error(std::string(what) + " probabilities must lie in (0, 1)");
    }
  }
}

MeasureSpec contrast_ratio(std::string name, std::string title, std::string label,
                           std::string plural, std::vector<double> u, std::vector<double> u2,
                           std::optional<double> tail_p) {
  MeasureSpec spec;
  spec.u = std::move(u);
  spec.coef = {1.0, -2.0, 1.0};
  spec.u2 = std::move(u2);
  spec.coef2 = {-1.0, 1.0};
  spec.name = std::move(name);
  spec.title = std::move(title);
  spec.label = std::move(label);
  spec.plural = std::move(plural);
  spec.tail_p = tail_p;
  return spec;
}

double tail_parameter(std::string_view name, std::optional<double> p, double fallback,
                      double lo, double hi) {
  const double value = p.value_or(fallback);
  if (!(value > lo && value < hi)) {
    throw std::domain_error("tail parameter for '" + std::string(name) + "' must lie in (" +
                            std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  return value;
}

std::string valid_names() {
  std::string out;
  for (auto n : measure_names()) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

MeasureSpec parse_quantile_ratio(std::string_view name) {
  const auto digits = name.substr(2);
  const bool ok = digits.size() == 4 && std::all_of(digits.begin(), digits.end(), [](char c) {
                    return std::isdigit(static_cast<unsigned char>(c)) != 0;
                  });
  if (!ok) {
    throw std::invalid_argument("malformed quantile-ratio measure '" + std::string(name) +
                                "': expected qr followed by four digits, e.g. qr9010");
  }
  const int num = (digits[0] - '0') * 10 + (digits[1] - '0');
  const int den = (digits[2] - '0') * 10 + (digits[3] - '0');
  if (num == 0 || den == 0) {
    throw std::domain_error("quantile-ratio percentages must lie in 01..99");
  }
  MeasureSpec spec;
  spec.u = {num / 100.0};
  spec.coef = {1.0};
  spec.u2 = {den / 100.0};
  spec.coef2 = {1.0};
  spec.name = std::string(name);
  const std::string tag = std::string(digits.substr(0, 2)) + "/" + std::string(digits.substr(2));
  spec.title = "quantile ratio (" + tag + ")";
  spec.label = "quantile ratio (" + tag + ")";
  spec.plural = "quantile ratios (" + tag + ")";
  return spec;
}

}  // namespace

void MeasureSpec::validate() const {
  if (u.empty()) throw std::invalid_argument("measure needs at least one probability in u");
  if (coef.size() != u.size()) throw std::invalid_argument("coef must have the same length as u");
  check_probabilities(u, "numerator");
  if (coef2.empty()) {
    if (!u2.empty()) throw std::invalid_argument("u2 given without coef2");
    return;
  }
  if (u2.size() != coef2.size()) {
    throw std::invalid_argument("coef2 must have the same length as u2");
  }
  check_probabilities(u2, "denominator");
  if (std::all_of(coef2.begin(), coef2.end(), [](double c) { return c == 0.0; })) {
    throw std::invalid_argument("denominator coefficients are all zero");
  }
}

MeasureSpec MeasureSpec::from_vectors(std::vector<double> u, std::vector<double> coef,
                                      std::vector<double> u2, std::vector<double> coef2) {
  MeasureSpec spec;
  if (coef.empty()) coef.assign(u.size(), 1.0);
  if (!coef2.empty() && u2.empty()) u2 = u;
  spec.u = std::move(u);
  spec.coef = std::move(coef);
  spec.u2 = std::move(u2);
  spec.coef2 = std::move(coef2);
  if (spec.u.size() == 1 && !spec.is_ratio() && spec.coef[0] == 1.0) {
    const std::string p = std::to_string(spec.u[0]);
    spec.title = "quantile (u = " + p.substr(0, p.find_last_not_of('0') + 1) + ")";
    spec.label = "quantile";
    spec.plural = "quantiles";
  }
  spec.validate();
  return spec;
}

MeasureSpec MeasureSpec::from_matrix(std::vector<double> u,
                                     const std::vector<std::vector<double>>& rows) {
  if (rows.size() != 2) {
    throw std::invalid_argument("coefficient matrix must have exactly two rows");
  }
  for (const auto& row : rows) {
    if (row.size() != u.size()) {
      throw std::invalid_argument("coefficient matrix rows must have the same length as u");
    }
  }
  MeasureSpec spec;
  spec.u2 = u;
  spec.u = std::move(u);
  spec.coef = rows[0];
  spec.coef2 = rows[1];
  spec.validate();
  return spec;
}

std::span<const std::string_view> measure_names() noexcept {
  static constexpr std::array<std::string_view, 11> names{
      "median", "iqr", "rCViqr", "bowley", "kelly", "groenR",
      "groenL", "moors", "lqw", "rqw", "qrXXYY"};
  return names;
}

MeasureSpec resolve_measure(std::string_view name, std::optional<double> p) {
  const auto no_tail = [&] {
    if (p) {
      throw std::invalid_argument("measure '" + std::string(name) +
                                  "' does not take a tail parameter");
    }
  };

  if (name == "median") {
    no_tail();
    MeasureSpec spec;
    spec.u = {0.5};
    spec.coef = {1.0};
    spec.name = "median";
    spec.title = spec.label = "median";
    spec.plural = "medians";
    return spec;
  }
  if (name == "iqr") {
    no_tail();
    MeasureSpec spec;
    spec.u = {0.25, 0.75};
    spec.coef = {-1.0, 1.0};
    spec.name = "iqr";
    spec.title = "interquartile range (IQR)";
    spec.label = "IQR";
    spec.plural = "IQRs";
    return spec;
  }
  if (name == "rCViqr") {
    no_tail();
    MeasureSpec spec;
    spec.u = {0.25, 0.75};
    spec.coef = {0.75 * -1.0, 0.75 * 1.0};
    spec.u2 = {0.5};
    spec.coef2 = {1.0};
    spec.name = "rCViqr";
    spec.title = "robust coefficient of variation (0.75*IQR/median)";
    spec.label = "Robust CV";
    spec.plural = "Robust CVs";
    return spec;
  }
  if (name == "bowley") {
    const double t = tail_parameter(name, p, 0.25, 0.0, 0.5);
    return contrast_ratio("bowley", "Bowley's skew", "Bowley's skew", "Bowley's skews",
                          {t, 0.5, 1.0 - t}, {t, 1.0 - t}, t);
  }
  if (name == "kelly") {
    no_tail();
    return contrast_ratio("kelly", "Kelly's skew", "Kelly's skew", "Kelly's skews",
                          {0.1, 0.5, 0.9}, {0.1, 0.9}, 0.1);
  }
  if (name == "groenR") {
    const double t = tail_parameter(name, p, 0.25, 0.0, 0.5);
    return contrast_ratio("groenR", "Groeneveld and Meeden's right skew", "right skew",
                          "right skews", {t, 0.5, 1.0 - t}, {t, 0.5}, t);
  }
  if (name == "groenL") {
    const double t = tail_parameter(name, p, 0.25, 0.0, 0.5);
    return contrast_ratio("groenL", "Groeneveld and Meeden's left skew", "left skew",
                          "left skews", {t, 0.5, 1.0 - t}, {0.5, 1.0 - t}, t);
  }
  if (name == "moors") {
    no_tail();
    MeasureSpec spec;
    spec.u = {1.0 / 8, 3.0 / 8, 5.0 / 8, 7.0 / 8};
    spec.coef = {-1.0, 1.0, -1.0, 1.0};
    spec.u2 = {2.0 / 8, 6.0 / 8};
    spec.coef2 = {-1.0, 1.0};
    spec.name = "moors";
    spec.title = "Moors kurtosis";
    spec.label = "Moors kurtosis";
    spec.plural = "Moors kurtoses";
    return spec;
  }
  if (name == "lqw") {
    const double t = tail_parameter(name, p, 0.25, 0.0, 0.5);
    return contrast_ratio("lqw", "left quantile tail weight", "LQW", "LQWs",
                          {t / 2, 0.25, (1.0 - t) / 2}, {t / 2, (1.0 - t) / 2}, t);
  }
  if (name == "rqw") {
    const double q = tail_parameter(name, p, 0.75, 0.5, 1.0);
    return contrast_ratio("rqw", "right quantile tail weight", "RQW", "RQWs",
                          {1.0 - q / 2, 0.75, (1.0 + q) / 2}, {1.0 - q / 2, (1.0 + q) / 2}, q);
  }
  if (name.starts_with("qr")) {
    no_tail();
    return parse_quantile_ratio(name);
  }
  throw std::invalid_argument("unknown measure '" + std::string(name) +
                              "'; valid measures: " + valid_names());
}

UnionGrid union_grid(const MeasureSpec& spec) {
  spec.validate();
  UnionGrid grid;
  grid.probs = spec.u;
  grid.probs.insert(grid.probs.end(), spec.u2.begin(), spec.u2.end());
  std::sort(grid.probs.begin(), grid.probs.end());
  grid.probs.erase(std::unique(grid.probs.begin(), grid.probs.end()), grid.probs.end());

  const auto index_of = [&](double p) {
    return static_cast<std::size_t>(
        std::lower_bound(grid.probs.begin(), grid.probs.end(), p) - grid.probs.begin());
  };
  grid.b1.assign(grid.probs.size(), 0.0);
  for (std::size_t i = 0; i < spec.u.size(); ++i) grid.b1[index_of(spec.u[i])] += spec.coef[i];
  if (spec.is_ratio()) {
    grid.b2.assign(grid.probs.size(), 0.0);
    for (std::size_t i = 0; i < spec.u2.size(); ++i) {
      grid.b2[index_of(spec.u2[i])] += spec.coef2[i];
    }
  }
  return grid;
}

double combine_quantiles(const UnionGrid& grid, std::span<const double> quantiles) {
  if (quantiles.size() != grid.probs.size()) {
    throw std::invalid_argument("quantile vector does not match the probability grid");
  }
  double num = 0.0;
  for (std::size_t i = 0; i < quantiles.size(); ++i) num += grid.b1[i] * quantiles[i];
  if (grid.b2.empty()) return num;
  double den = 0.0;
  for (std::size_t i = 0; i < quantiles.size(); ++i) den += grid.b2[i] * quantiles[i];
  if (den == 0.0) throw Error("zero denominator");
  return num / den;
}

double evaluate_measure(const MeasureSpec& spec, const std::function<double(double)>& quantile) {
  const UnionGrid grid = union_grid(spec);
  std::vector<double> q;
  q.reserve(grid.probs.size());
  for (double p : grid.probs) q.push_back(quantile(p));
  return combine_quantiles(grid, q);
}

double estimate_measure(const Sample& s, const MeasureSpec& spec, int type) {
  const UnionGrid grid = union_grid(spec);
  return combine_quantiles(grid, sample_quantiles(s, grid.probs, type));
}

}  // namespace quantest
