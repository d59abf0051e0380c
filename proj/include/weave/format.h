#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace weave
{
// Shortest decimal form that parses back to the identical double
// (never more than 17 significant digits).
std::string format_double(double value);

double parse_double(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char separator);

std::string_view trim(std::string_view text);
}
