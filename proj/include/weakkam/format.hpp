#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace weakkam {

/// Locale-independent rendering with 17 significant digits.
std::string format_real(double value);

/// Parses a full string as a real number; throws invalid_input otherwise.
double parse_real(std::string_view text);
long parse_integer(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

}  // namespace weakkam
