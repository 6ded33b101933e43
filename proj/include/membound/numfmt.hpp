#pragma once

#include <string>
#include <string_view>

#include "membound/rng.hpp"

namespace membound {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// Coordinates joined by `sep`, each via format_double.
std::string format_point(const Point& x, std::string_view sep = ",");

/// Strict parse of a full decimal string; throws std::invalid_argument.
double parse_double(std::string_view text);

}  // namespace membound
