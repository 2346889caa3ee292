#include "magdiv/format.hpp"

#include <charconv>
#include <cstdio>

namespace magdiv {

std::string format_real(double x) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::optional<double> parse_real(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const char *first = token.data();
  const char *last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || token.empty()) return std::nullopt;
  return value;
}

}  // namespace magdiv
