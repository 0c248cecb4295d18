#pragma once

#include "quantest/covariance.hpp"
#include "quantest/inference.hpp"

#include <string>
#include <string_view>

namespace quantest::cli {

enum class Format { Text, Json };

Format parse_format(std::string_view text);

/// Significant-digit formatting; infinities print as Inf / -Inf.
std::string format_number(double v, int digits = 6);

/// R-style p-value: "< 2.2e-16" below that threshold, else 4 significant digits.
std::string format_p_value(double p);

std::string render_text(const TestResult& r);
std::string render_json(const TestResult& r);
std::string render(const TestResult& r, Format format);

std::string render_text(const QuantileCov& cov);
std::string render_json(const QuantileCov& cov);
std::string render(const QuantileCov& cov, Format format);

/// Inverse of render_json. Null interval bounds read back as -inf / +inf.
TestResult result_from_json(std::string_view text);

}  // namespace quantest::cli
