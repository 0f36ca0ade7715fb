#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace cskde {

//! Whole-token decimal parse, independent of the C locale.
std::optional<double> parse_double(std::string_view text);

//! %.17g in the C locale, which round-trips every finite double.
std::string format_double(double v);

} // namespace cskde
