#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace magdiv {

// 17 significant digits: lossless for binary64.
std::string format_real(double x);

// Parses the whole token as a decimal real; nullopt on any trailing garbage.
std::optional<double> parse_real(std::string_view token);

}  // namespace magdiv
