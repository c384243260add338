#pragma once

#include <string>
#include <vector>

namespace nng {

/// Locale-independent shortest-safe rendering with 17 significant digits.
std::string format_double(double v);

/// Joins fields with commas and terminates with a single LF.
std::string csv_row(const std::vector<std::string>& fields);
std::string csv_row(const std::vector<double>& values);

}  // namespace nng
