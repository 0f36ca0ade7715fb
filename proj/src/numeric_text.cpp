#include "cskde/numeric_text.hpp"

#include <charconv>

namespace cskde {

std::optional<double> parse_double(std::string_view text)
{
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    return std::nullopt;
  return v;
}

std::string format_double(double v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

} // namespace cskde
