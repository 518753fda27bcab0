#pragma once

#include <string>
#include <vector>

namespace reopen::detail {

using Row = std::vector<std::string>;

std::vector<Row> read_csv(const std::string& path);
double parse_double(const std::string& s, const std::string& where);
std::string trim(const std::string& s);
std::string lower(std::string s);
// Shortest decimal that parses back to exactly v.
std::string fmt_double(double v);

}  // namespace reopen::detail
