#pragma once

#include <span>
#include <string>

namespace gcp {

// Shortest decimal form that parses back to the same double; '.' separator.
std::string format_double(double value);

// Comma-joined format_double values.
std::string format_list(std::span<const double> values);

}  // namespace gcp
