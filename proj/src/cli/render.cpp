#include "quantest/cli/render.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace quantest::cli {

namespace {

using nlohmann::json;

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double read_bound(const json& j, const char* key, double fallback) {
  const auto& v = j.at(key);
  return v.is_null() ? fallback : v.get<double>();
}

std::string method_name(const QdMethod& m) {
  return m.kind == QdMethodKind::Qor ? "qor" : "density";
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "text") return Format::Text;
  if (text == "json") return Format::Json;
  throw std::invalid_argument("format must be text or json");
}

std::string format_number(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  if (std::isnan(v)) return "NaN";
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

std::string format_p_value(double p) {
  if (p < 2.2e-16) return "< 2.2e-16";
  return "= " + format_number(p, 4);
}

std::string render_text(const TestResult& r) {
  std::ostringstream os;
  os << "\n\t" << r.method << "\n\n";
  os << "data:  " << r.data_name << "\n";
  os << "Z = " << format_number(r.statistic) << ", p-value " << format_p_value(r.p_value) << "\n";
  os << "alternative hypothesis: " << r.hypothesis << "\n";
  os << format_number(r.conf_level * 100.0) << " percent confidence interval:\n";
  os << " " << format_number(r.conf_low) << " " << format_number(r.conf_high) << "\n";
  os << "sample estimates:\n";
  os << r.estimate_label << "\n";
  os << " " << format_number(r.estimate) << "\n";
  if (!r.warnings.empty()) {
    os << "\n" << (r.warnings.size() == 1 ? "Warning message:" : "Warning messages:") << "\n";
    for (const auto& w : r.warnings) os << w << "\n";
  }
  return os.str();
}

std::string render_json(const TestResult& r) {
  json j;
  j["method"] = r.method;
  j["data_name"] = r.data_name;
  j["estimate_label"] = r.estimate_label;
  j["hypothesis"] = r.hypothesis;
  j["estimate"] = finite_or_null(r.estimate);
  j["se"] = finite_or_null(r.se);
  j["statistic"] = finite_or_null(r.statistic);
  j["p_value"] = r.p_value;
  j["conf_low"] = finite_or_null(r.conf_low);
  j["conf_high"] = finite_or_null(r.conf_high);
  j["conf_level"] = r.conf_level;
  j["null_value"] = r.null_value;
  j["alternative"] = to_string(r.alternative);
  j["scale"] = to_string(r.scale);
  j["warnings"] = r.warnings;
  return j.dump();
}

std::string render(const TestResult& r, Format format) {
  return format == Format::Json ? render_json(r) + "\n" : render_text(r);
}

TestResult result_from_json(std::string_view text) {
  const json j = json::parse(text);
  constexpr double inf = std::numeric_limits<double>::infinity();
  TestResult r;
  r.method = j.at("method").get<std::string>();
  r.data_name = j.at("data_name").get<std::string>();
  r.estimate_label = j.at("estimate_label").get<std::string>();
  r.hypothesis = j.at("hypothesis").get<std::string>();
  r.estimate = read_bound(j, "estimate", std::numeric_limits<double>::quiet_NaN());
  r.se = read_bound(j, "se", std::numeric_limits<double>::quiet_NaN());
  r.statistic = read_bound(j, "statistic", std::numeric_limits<double>::quiet_NaN());
  r.p_value = j.at("p_value").get<double>();
  r.conf_low = read_bound(j, "conf_low", -inf);
  r.conf_high = read_bound(j, "conf_high", inf);
  r.conf_level = j.at("conf_level").get<double>();
  r.null_value = j.at("null_value").get<double>();
  r.alternative = parse_alternative(j.at("alternative").get<std::string>());
  const auto scale = j.at("scale").get<std::string>();
  if (scale == "identity") {
    r.scale = Scale::Identity;
  } else if (scale == "log") {
    r.scale = Scale::Log;
  } else if (scale == "back_transformed_ratio") {
    r.scale = Scale::BackTransformedRatio;
  } else {
    throw std::invalid_argument("unknown scale '" + scale + "'");
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

std::string render_text(const QuantileCov& cov) {
  std::ostringstream os;
  os << "Quantile covariance matrix (n = " << cov.n << ", method = " << method_name(cov.method);
  if (cov.method.kind == QdMethodKind::Qor) {
    os << ", lognormal QOR sigma = " << format_number(cov.qor_sigma);
    if (cov.shift != 0.0) os << ", shift = " << format_number(cov.shift);
  }
  os << ")\n";
  constexpr int width = 13;
  os << std::setw(8) << "";
  for (double p : cov.probs) os << std::setw(width) << format_number(p);
  os << "\n";
  for (std::size_t i = 0; i < cov.dim(); ++i) {
    os << std::left << std::setw(8) << format_number(cov.probs[i]) << std::right;
    for (std::size_t j = 0; j < cov.dim(); ++j) os << std::setw(width) << format_number(cov(i, j));
    os << "\n";
  }
  if (cov.qdens_floored) {
    os << "Warning: a quantile density estimate was not positive and was floored.\n";
  }
  return os.str();
}

std::string render_json(const QuantileCov& cov) {
  json j;
  j["probs"] = cov.probs;
  json rows = json::array();
  for (std::size_t i = 0; i < cov.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < cov.dim(); ++k) row.push_back(cov(i, k));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  j["qdens"] = cov.qdens;
  j["bandwidths"] = cov.bandwidths;
  j["n"] = cov.n;
  j["method"] = method_name(cov.method);
  j["qor_sigma"] = cov.qor_sigma;
  j["shift"] = cov.shift;
  j["qdens_floored"] = cov.qdens_floored;
  return j.dump();
}

std::string render(const QuantileCov& cov, Format format) {
  return format == Format::Json ? render_json(cov) + "\n" : render_text(cov);
}

}  // namespace quantest::cli
