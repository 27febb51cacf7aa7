#include "gsieve/cli/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace gsieve::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void write_value(std::ostream& os, const nlohmann::ordered_json& node, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (node.type()) {
    case nlohmann::json::value_t::object: {
      if (node.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& item : node.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << nlohmann::json(item.key()).dump() << ": ";
        write_value(os, item.value(), depth + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (node.empty()) {
        os << "[]";
        return;
      }
      const bool scalars = std::all_of(node.begin(), node.end(),
                                       [](const auto& v) { return v.is_primitive(); });
      if (scalars) {
        os << "[";
        for (std::size_t i = 0; i < node.size(); ++i) {
          if (i) os << ", ";
          write_value(os, node[i], depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < node.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_value(os, node[i], depth + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = node.get<double>();
      if (std::isfinite(v)) {
        os << format_double(v);
      } else {
        os << "null";
      }
      return;
    }
    default:
      os << node.dump();
      return;
  }
}

}  // namespace

void write_json(std::ostream& os, const nlohmann::ordered_json& doc) {
  write_value(os, doc, 0);
  os << "\n";
}

void write_csv(std::ostream& os, const std::vector<CsvColumn>& columns,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& trailer) {
  os << "# ";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ",";
    os << columns[i].name << " (" << columns[i].unit << ")";
  }
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << format_double(row[i]);
    }
    os << "\n";
  }
  for (const auto& line : trailer) os << "# " << line << "\n";
}

}  // namespace gsieve::cli
