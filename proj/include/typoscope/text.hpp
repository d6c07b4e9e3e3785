#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace typoscope {

std::vector<std::string> split(std::string_view s, char sep);
std::string strip(std::string_view s);

// Shortest text form that round-trips an IEEE-754 double exactly.
std::string fmt_double(double x);

double parse_double(const std::string& s, const std::string& context);
long parse_long(const std::string& s, const std::string& context);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace typoscope
