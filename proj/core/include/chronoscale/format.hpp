#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace chronoscale {

/// Shortest decimal text that round-trips to the same double. Locale-free.
std::string format_number(double v);

/// Locale-free parse of a full string as a double ("inf"/"-inf" accepted).
std::optional<double> parse_number(std::string_view text);

std::string_view trim(std::string_view s) noexcept;

}  // namespace chronoscale
