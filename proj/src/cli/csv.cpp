#include "quantest/cli/csv.hpp"

#include "quantest/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace quantest::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  for (auto& f : fields) f = std::string(trim(f));
  return fields;
}

bool parse_finite(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return res.ec == std::errc{} && res.ptr == cell.data() + cell.size() && std::isfinite(out);
}

std::size_t select_column(const std::vector<std::string>& header, std::string_view selector) {
  if (selector.empty()) return 0;
  const bool numeric = std::all_of(selector.begin(), selector.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
  if (numeric) {
    const auto index = static_cast<std::size_t>(std::stoul(std::string(selector)));
    if (index == 0 || index > header.size()) {
      throw std::invalid_argument("column index " + std::string(selector) + " out of range (1.." +
                                  std::to_string(header.size()) + ")");
    }
    return index - 1;
  }
  const auto it = std::find(header.begin(), header.end(), selector);
  if (it == header.end()) {
    throw std::invalid_argument("column '" + std::string(selector) + "' not found in header");
  }
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

ColumnData read_column(std::istream& in, std::string_view selector) {
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      have_header = true;
      break;
    }
  }
  if (!have_header) throw Error("empty file");
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);

  const auto header = split_record(line);
  const std::size_t col = select_column(header, selector);

  ColumnData out;
  out.column = header[col];
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_record(line);
    double v = 0.0;
    if (col < fields.size() && parse_finite(fields[col], v)) {
      out.values.push_back(v);
    } else {
      ++out.skipped;
    }
  }
  if (out.values.empty()) throw Error("no usable rows in column '" + out.column + "'");
  return out;
}

LoadedColumn load_column(const std::string& path, std::string_view selector) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  ColumnData data = read_column(in, selector);
  return {Sample(std::move(data.values)), data.skipped, std::move(data.column)};
}

}  // namespace quantest::cli
