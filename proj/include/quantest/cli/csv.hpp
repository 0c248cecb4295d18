#pragma once

#include "quantest/sample.hpp"

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace quantest::cli {

struct ColumnData {
  std::vector<double> values;
  std::size_t skipped = 0;  // rows whose cell was missing, non-numeric or non-finite
  std::string column;       // header name of the selected column
};

/// Reads one column of a CSV stream with a header row. `selector` is a
/// header name, a 1-based column index, or empty for the first column.
ColumnData read_column(std::istream& in, std::string_view selector);

struct LoadedColumn {
  Sample sample;
  std::size_t skipped = 0;
  std::string column;
};

LoadedColumn load_column(const std::string& path, std::string_view selector);

}  // namespace quantest::cli
