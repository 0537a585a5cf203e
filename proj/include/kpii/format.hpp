#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace kpii {

// Shortest decimal that reads back to the same double; -0 prints as 0.
std::string fmt_num(double v);

// JSON text with every float in shortest round-trip form, non-finite as null.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

struct CsvTable {
  std::vector<std::string> comments;  // written as "# ..." lines
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};
void write_csv(std::ostream& out, const CsvTable& t);

std::string csv_header(const std::string& case_id, double t);

}  // namespace kpii
