#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vidgraph::detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

/// Splits a table row on tabs/commas/semicolons when present, otherwise on
/// runs of blanks. With `comma_is_data` set only tabs and semicolons delimit,
/// so that comma decimals survive.
inline std::vector<std::string_view> split_fields(std::string_view line, bool comma_is_data = false) {
  std::vector<std::string_view> out;
  const char* delims = comma_is_data ? "\t;" : "\t,;";
  const bool delimited = line.find_first_of(delims) != std::string_view::npos;
  const char* seps = delimited ? delims : " ";
  std::size_t pos = 0;
  while (pos <= line.size()) {
    auto next = line.find_first_of(seps, pos);
    if (next == std::string_view::npos) next = line.size();
    auto field = trim(line.substr(pos, next - pos));
    if (delimited || !field.empty()) out.push_back(field);
    pos = next + 1;
  }
  if (!delimited) return out;
  // Trailing empty columns are not data.
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

inline std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

template <class Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Accepts both "0.5012" and "0,5012".
inline std::optional<double> parse_decimal(std::string_view s) {
  std::string buf(trim(s));
  if (buf.empty()) return std::nullopt;
  for (auto& c : buf)
    if (c == ',') c = '.';
  double v{};
  auto [p, ec] = std::from_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{} || p != buf.data() + buf.size()) return std::nullopt;
  return v;
}

/// Fixed point with at most `digits` fractional digits, trailing zeros dropped.
inline std::string format_decimal(double v, int digits = 4) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  std::string s(buf, r.ptr);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace vidgraph::detail
