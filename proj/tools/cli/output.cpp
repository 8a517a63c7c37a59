#include "output.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

#include <json.hpp>

namespace cwphase::cli {
namespace {

using Json = nlohmann::ordered_json;

/// The number as it would read back from its formatted text, so JSON
/// output honours the requested precision.
Json json_number(double v, int precision) {
  if (!std::isfinite(v)) return nullptr;
  const std::string text = format_number(v, precision);
  double rounded = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), rounded);
  return rounded;
}

std::string csv_cell(const std::variant<double, long long, std::string>& cell, int precision) {
  if (const double* d = std::get_if<double>(&cell)) return format_number(*d, precision);
  if (const long long* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

}  // namespace

std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, result.ptr);
}

void write(std::ostream& os, const Record& record, const OutputSpec& spec) {
  if (spec.format == Format::json) {
    Json obj = Json::object();
    for (const auto& [key, value] : record) {
      std::visit(
          [&, &k = key](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              obj[k] = json_number(v, spec.precision);
            } else if constexpr (std::is_same_v<T, std::vector<double>>) {
              Json arr = Json::array();
              for (const double d : v) arr.push_back(json_number(d, spec.precision));
              obj[k] = arr;
            } else {
              obj[k] = v;
            }
          },
          value);
    }
    os << obj.dump() << '\n';
    return;
  }

  std::vector<std::string> header;
  std::vector<std::string> row;
  for (const auto& [key, value] : record) {
    std::visit(
        [&, &k = key](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            header.push_back(k);
            row.push_back(format_number(v, spec.precision));
          } else if constexpr (std::is_same_v<T, long long>) {
            header.push_back(k);
            row.push_back(std::to_string(v));
          } else if constexpr (std::is_same_v<T, bool>) {
            header.push_back(k);
            row.push_back(v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, std::string>) {
            header.push_back(k);
            row.push_back(v);
          } else {
            for (std::size_t i = 0; i < v.size(); ++i) {
              header.push_back(k + "_" + std::to_string(i));
              if constexpr (std::is_same_v<T, std::vector<double>>) {
                row.push_back(format_number(v[i], spec.precision));
              } else {
                row.push_back(v[i]);
              }
            }
          }
        },
        value);
  }
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
  os << '\n';
}

void write(std::ostream& os, const Table& table, const OutputSpec& spec) {
  if (spec.format == Format::json) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      Json arr = Json::array();
      for (const auto& row : table.rows) {
        const auto& cell = row[c];
        if (const double* d = std::get_if<double>(&cell)) {
          arr.push_back(json_number(*d, spec.precision));
        } else if (const long long* i = std::get_if<long long>(&cell)) {
          arr.push_back(*i);
        } else {
          arr.push_back(std::get<std::string>(cell));
        }
      }
      obj[table.columns[c]] = arr;
    }
    os << obj.dump() << '\n';
    return;
  }

  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c], spec.precision);
    os << '\n';
  }
}

}  // namespace cwphase::cli
