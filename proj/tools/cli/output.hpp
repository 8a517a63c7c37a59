#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cwphase::cli {

enum class Format { csv, json };

struct OutputSpec {
  Format format = Format::csv;
  int precision = 12;
};

/// A scalar or a homogeneous list; lists are the only nesting allowed.
using Value = std::variant<double, long long, bool, std::string, std::vector<double>, std::vector<std::string>>;

/// An ordered flat record (key -> value).
using Record = std::vector<std::pair<std::string, Value>>;

/// Column-oriented table. Every row has one cell per column.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::variant<double, long long, std::string>>> rows;
};

/// Shortest decimal with `precision` significant digits; locale-free.
std::string format_number(double v, int precision);

/// CSV: a header row and one data row; list values expand to key_0, key_1, ...
/// JSON: one flat object; non-finite numbers become null.
void write(std::ostream& os, const Record& record, const OutputSpec& spec);

/// CSV: header plus rows. JSON: one object mapping each column to its values.
void write(std::ostream& os, const Table& table, const OutputSpec& spec);

}  // namespace cwphase::cli
