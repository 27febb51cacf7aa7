#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace gsieve::cli {

// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double value);

// Pretty-printed JSON with every floating-point number at 17 significant
// digits and non-finite numbers written as null.
void write_json(std::ostream& os, const nlohmann::ordered_json& doc);

struct CsvColumn {
  std::string name;
  std::string unit;
};

// "# name (unit),..." header, one line per row, then "# ..." trailer lines.
void write_csv(std::ostream& os, const std::vector<CsvColumn>& columns,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& trailer = {});

}  // namespace gsieve::cli
