#pragma once

// CSV ingestion. Dialect: comma delimiter, double-quote quoting with ""
// escapes, mandatory header row, no sniffing. Selected cells must parse as
// finite numbers; anything else (including "NA" or an empty cell) rejects
// the file with the offending line and column.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "pillai/error.hpp"
#include "pillai/linalg.hpp"

namespace pillai {

struct CsvRecord {
  std::size_t line;  ///< 1-based line on which the record starts
  std::vector<std::string> fields;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRecord> records;
};

/// Parses the whole stream. Blank lines are skipped; every record must have
/// as many fields as the header.
inline CsvTable read_csv(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  std::vector<CsvRecord> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    CsvRecord rec{line, {}};
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    bool end_of_record = false;
    while (i < text.size() && !end_of_record) {
      const char c = text[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          quoted = false;
        } else {
          if (c == '\n') ++line;
          field += c;
        }
        ++i;
        continue;
      }
      switch (c) {
        case '"':
          if (!field.empty() || field_was_quoted) {
            throw ParseError(line, "#" + std::to_string(rec.fields.size()),
                             "stray quote inside unquoted field");
          }
          quoted = field_was_quoted = true;
          break;
        case ',':
          rec.fields.push_back(std::move(field));
          field.clear();
          field_was_quoted = false;
          break;
        case '\r':
          break;
        case '\n':
          ++line;
          end_of_record = true;
          break;
        default:
          if (field_was_quoted) {
            throw ParseError(line, "#" + std::to_string(rec.fields.size()),
                             "text after closing quote");
          }
          field += c;
      }
      ++i;
    }
    if (quoted) {
      throw ParseError(rec.line, "#" + std::to_string(rec.fields.size()),
                       "unterminated quoted field");
    }
    rec.fields.push_back(std::move(field));
    const bool blank = rec.fields.size() == 1 && rec.fields[0].empty() &&
                       !field_was_quoted;
    if (!blank) rows.push_back(std::move(rec));
  }
  if (rows.empty()) throw ParseError(1, "", "missing header row");

  CsvTable table;
  table.header = std::move(rows.front().fields);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].fields.size() != table.header.size()) {
      throw ParseError(rows[r].line, "",
                       "expected " + std::to_string(table.header.size()) +
                           " fields, found " +
                           std::to_string(rows[r].fields.size()));
    }
    table.records.push_back(std::move(rows[r]));
  }
  return table;
}

/// Parses a finite decimal number, allowing surrounding spaces.
inline std::optional<double> parse_number(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

/// A column by header name, or by zero-based index when the text is not a
/// header name and is all digits.
using ColumnRef = std::string;

struct ColumnSpec {
  ColumnRef x_column;
  /// Empty means "all remaining numeric columns".
  std::vector<ColumnRef> y_columns;
};

struct Dataset {
  std::string name;
  std::string x_name;
  std::vector<std::string> y_names;
  Vector x;
  Matrix y;

  std::size_t n() const noexcept { return x.size(); }
  std::size_t k() const noexcept { return y.cols(); }
};

namespace detail {

inline std::size_t resolve_column(const std::vector<std::string>& header,
                                  const ColumnRef& ref) {
  const auto it = std::find(header.begin(), header.end(), ref);
  if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  if (!ref.empty() && std::all_of(ref.begin(), ref.end(),
                                  [](char c) { return c >= '0' && c <= '9'; })) {
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), idx);
    if (ec == std::errc{} && idx < header.size()) return idx;
  }
  throw MissingColumn(ref);
}

}  // namespace detail

/// Resolves `spec` against the header and extracts x and Y. Column selection
/// is validated before any data cell is read.
inline Dataset load_csv(const CsvTable& table, const ColumnSpec& spec,
                        std::string name = "") {
  const auto& header = table.header;
  const std::size_t x_idx = detail::resolve_column(header, spec.x_column);

  std::vector<std::size_t> y_idx;
  if (!spec.y_columns.empty()) {
    for (const auto& ref : spec.y_columns) {
      const std::size_t j = detail::resolve_column(header, ref);
      if (j == x_idx) {
        throw ColumnConflict("column '" + header[j] +
                             "' is selected as both x and a Y column");
      }
      if (std::find(y_idx.begin(), y_idx.end(), j) != y_idx.end()) {
        throw ColumnConflict("column '" + header[j] + "' is listed twice in Y");
      }
      y_idx.push_back(j);
    }
  } else {
    // A column is numeric when at least one of its cells parses as a number.
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j == x_idx) continue;
      const bool numeric =
          std::any_of(table.records.begin(), table.records.end(),
                      [&](const CsvRecord& r) {
                        return parse_number(r.fields[j]).has_value();
                      });
      if (numeric) y_idx.push_back(j);
    }
  }
  if (y_idx.empty()) throw EmptySelection("no Y columns selected");

  const std::size_t n = table.records.size();
  const std::size_t k = y_idx.size();
  if (n < k + 2) throw TooFewRows(n, k);

  std::vector<double> x(n);
  std::vector<double> y(n * k);
  auto cell = [&](const CsvRecord& rec, std::size_t col) {
    const auto v = parse_number(rec.fields[col]);
    if (!v) {
      throw ParseError(rec.line, header[col],
                       "not a finite number: '" + rec.fields[col] + "'");
    }
    return *v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const CsvRecord& rec = table.records[i];
    x[i] = cell(rec, x_idx);
    for (std::size_t j = 0; j < k; ++j) y[i * k + j] = cell(rec, y_idx[j]);
  }

  std::vector<std::string> y_names;
  for (std::size_t j : y_idx) y_names.push_back(header[j]);
  return Dataset{std::move(name), header[x_idx], std::move(y_names),
                 Vector(std::move(x)), Matrix(n, k, std::move(y))};
}

inline Dataset load_csv(std::istream& in, const ColumnSpec& spec,
                        std::string name = "") {
  return load_csv(read_csv(in), spec, std::move(name));
}

inline Dataset load_csv(const std::string& path, const ColumnSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) {
    name = name.substr(slash + 1);
  }
  return load_csv(in, spec, std::move(name));
}

}  // namespace pillai
