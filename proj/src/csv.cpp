#include "ppfs/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ppfs/errors.hpp"

namespace ppfs {

namespace {

// One record, handling quoted fields and embedded newlines. Returns false on
// end of input with nothing read.
bool read_record(std::istream& in, std::vector<std::string>& out,
                 std::size_t& line_no) {
  out.clear();
  int c = in.get();
  if (c == EOF) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  auto flush = [&] {
    out.push_back(std::move(field));
    field.clear();
  };
  while (true) {
    if (c == EOF) {
      if (quoted) throw IngestError("line " + std::to_string(line_no) +
                                    ": unterminated quoted field");
      flush();
      return true;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        int next = in.get();
        if (next == '"') {
          field.push_back('"');
        } else {
          quoted = false;
          c = next;
          continue;
        }
      } else {
        if (ch == '\n') ++line_no;
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty() && !any) {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      flush();
      any = false;
    } else if (ch == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      ++line_no;
      flush();
      return true;
    } else {
      field.push_back(ch);
      any = true;
    }
    c = in.get();
  }
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

Csv parse_csv(std::istream& in) {
  Csv csv;
  std::size_t line_no = 1;
  if (!read_record(in, csv.header, line_no))
    throw IngestError("empty input: no header row");
  if (csv.header.empty() || (csv.header.size() == 1 && csv.header[0].empty()))
    throw IngestError("empty header row");
  std::unordered_set<std::string> seen;
  for (const auto& h : csv.header) {
    if (h.empty()) throw IngestError("empty column name in header");
    if (!seen.insert(h).second)
      throw IngestError("duplicate header column '" + h + "'");
  }
  std::vector<std::string> rec;
  while (read_record(in, rec, line_no)) {
    if (rec.size() == 1 && rec[0].empty()) continue;  // trailing blank line
    std::size_t row_no = csv.rows.size() + 1;         // 1-based data row
    if (rec.size() != csv.header.size())
      throw IngestError("row " + std::to_string(row_no) + " has " +
                        std::to_string(rec.size()) + " fields, expected " +
                        std::to_string(csv.header.size()));
    for (std::size_t i = 0; i < rec.size(); ++i)
      if (rec[i].empty())
        throw IngestError("row " + std::to_string(row_no) +
                          ": empty cell in column '" + csv.header[i] + "'");
    csv.rows.push_back(rec);
  }
  return csv;
}

Csv read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open '" + path + "'");
  return parse_csv(in);
}

std::size_t resolve_column(const std::vector<std::string>& header,
                          const std::string& selector) {
  if (selector.empty()) return header.size() - 1;
  auto it = std::find(header.begin(), header.end(), selector);
  if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  if (std::all_of(selector.begin(), selector.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    std::size_t idx = std::stoull(selector);
    if (idx < header.size()) return idx;
    throw IngestError("class column index " + selector + " out of range (" +
                      std::to_string(header.size()) + " columns)");
  }
  throw IngestError("no column named '" + selector + "'");
}

DecisionTable table_from_csv(const Csv& csv, const std::string& class_column,
                             unsigned bins) {
  if (csv.rows.empty()) throw IngestError("no data rows");
  if (csv.header.size() < 2)
    throw IngestError("need at least one conditional attribute plus the class");
  std::size_t cls = resolve_column(csv.header, class_column);

  std::vector<std::size_t> cond;  // source column per attribute
  std::vector<std::string> names;
  for (std::size_t c = 0; c < csv.header.size(); ++c)
    if (c != cls) {
      cond.push_back(c);
      names.push_back(csv.header[c]);
    }

  // Detect continuous columns: fully numeric with fractional values or a
  // large distinct count. Bin them if asked, reject otherwise.
  std::vector<int> bin_this(cond.size(), 0);
  std::vector<double> lo(cond.size()), hi(cond.size());
  for (std::size_t a = 0; a < cond.size(); ++a) {
    bool numeric = true;
    bool fractional = false;
    std::set<std::string> distinct;
    double mn = 0, mx = 0;
    for (std::size_t r = 0; r < csv.rows.size() && numeric; ++r) {
      const std::string& cell = csv.rows[r][cond[a]];
      double v;
      if (!parse_number(cell, v)) {
        numeric = false;
        break;
      }
      if (v != std::floor(v)) fractional = true;
      distinct.insert(cell);
      if (r == 0 || v < mn) mn = v;
      if (r == 0 || v > mx) mx = v;
    }
    if (numeric && (fractional || distinct.size() > 20)) {
      if (bins == 0)
        throw IngestError("column '" + names[a] +
                          "' looks continuous; bin it first or pass --bins");
      bin_this[a] = 1;
      lo[a] = mn;
      hi[a] = mx;
    }
  }

  DecisionTable t(names, csv.header[cls]);
  for (const auto& row : csv.rows) {
    std::vector<std::string> values;
    values.reserve(cond.size());
    for (std::size_t a = 0; a < cond.size(); ++a) {
      const std::string& cell = row[cond[a]];
      if (!bin_this[a]) {
        values.push_back(cell);
        continue;
      }
      double v = 0;
      parse_number(cell, v);
      unsigned b = 0;
      if (hi[a] > lo[a]) {
        b = static_cast<unsigned>((v - lo[a]) / (hi[a] - lo[a]) * bins);
        if (b >= bins) b = bins - 1;
      }
      values.push_back("b" + std::to_string(b));
    }
    t.add_row(values, row[cls]);
  }
  return t;
}

NumericTable numeric_from_csv(const Csv& csv, const std::string& class_column) {
  if (csv.rows.empty()) throw IngestError("no data rows");
  std::size_t cls = resolve_column(csv.header, class_column);
  NumericTable t;
  t.n_rows = csv.rows.size();
  for (std::size_t c = 0; c < csv.header.size(); ++c) {
    if (c == cls) continue;
    std::vector<double> col;
    col.reserve(csv.rows.size());
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
      double v;
      if (!parse_number(csv.rows[r][c], v))
        throw IngestError("column '" + csv.header[c] + "' row " +
                          std::to_string(r + 1) + " is not numeric");
      col.push_back(v);
    }
    t.feature_names.push_back(csv.header[c]);
    t.columns.push_back(std::move(col));
  }
  if (t.feature_names.empty())
    throw IngestError("no feature columns besides the class");
  return t;
}

}  // namespace ppfs
