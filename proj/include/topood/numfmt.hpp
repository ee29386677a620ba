#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace topood {

/// Shortest decimal that round-trips to the same double. Integral values keep a
/// trailing ".0"; infinities print as "inf" / "-inf".
std::string format_real(double value);

/// Strict parse of a full decimal token (surrounding blanks allowed). Accepts "inf".
std::optional<double> parse_real(std::string_view text);

} // namespace topood
