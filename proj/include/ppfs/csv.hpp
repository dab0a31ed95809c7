#pragma once

#include <istream>
#include <string>
#include <vector>

#include "ppfs/decision_table.hpp"

namespace ppfs {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Comma-separated, first row is the header, double-quote quoting with ""
// escapes, LF or CRLF line ends. Rejects ragged rows, duplicate headers,
// empty cells and an empty file; errors name the offending row or column.
Csv parse_csv(std::istream& in);
Csv read_csv_file(const std::string& path);

// Column selector: a header name, or a 0-based index written in decimal.
// Names win when a header happens to look numeric.
std::size_t resolve_column(const std::vector<std::string>& header,
                           const std::string& selector);

// Build a decision table; class_column (default: last) becomes the decision.
// Numeric columns that look continuous (any fractional value, or more than
// 20 distinct values) are rejected unless bins > 0 asks for equal-width
// binning, which maps them to labels "b0".."b<bins-1>".
DecisionTable table_from_csv(const Csv& csv, const std::string& class_column,
                             unsigned bins = 0);

// Numeric view for the eigenvalue backend: every non-class column must parse
// as a number; the error names the first column that does not.
struct NumericTable {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> columns;  // per feature, length = rows
  std::size_t n_rows = 0;
};
NumericTable numeric_from_csv(const Csv& csv, const std::string& class_column);

}  // namespace ppfs
