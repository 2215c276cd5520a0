#include "algsim/addr.hpp"

#include <cctype>
#include <charconv>

#include "algsim/errors.hpp"

namespace algsim {

namespace {

bool parse_u8(std::string_view text, std::uint8_t& out) {
  if (text.empty() || text.size() > 3) return false;
  unsigned v = 0;
  auto [p, ec] = std::from_chars(text.begin(), text.end(), v);
  if (ec != std::errc() || p != text.end() || v > 255) return false;
  out = static_cast<std::uint8_t>(v);
  return true;
}

int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::optional<IpAddr> IpAddr::try_parse(std::string_view text) {
  IpAddr ip;
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    std::size_t dot = i < 3 ? text.find('.', start) : text.size();
    if (dot == std::string_view::npos) return std::nullopt;
    if (!parse_u8(text.substr(start, dot - start), ip.b[i])) return std::nullopt;
    start = dot + 1;
  }
  return ip;
}

IpAddr IpAddr::parse(std::string_view text) {
  auto ip = try_parse(text);
  if (!ip) throw ConfigError("", "invalid IPv4 address '" + std::string(text) + "'");
  return *ip;
}

std::string IpAddr::to_string() const {
  std::string s;
  for (int i = 0; i < 4; ++i) {
    if (i) s += '.';
    s += std::to_string(b[i]);
  }
  return s;
}

std::optional<MacAddr> MacAddr::try_parse(std::string_view text) {
  if (text.size() != 17) return std::nullopt;
  MacAddr mac;
  for (int i = 0; i < 6; ++i) {
    int hi = hex_val(text[std::size_t(i * 3)]);
    int lo = hex_val(text[std::size_t(i * 3 + 1)]);
    if (hi < 0 || lo < 0) return std::nullopt;
    if (i < 5 && text[std::size_t(i * 3 + 2)] != ':') return std::nullopt;
    mac.b[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return mac;
}

MacAddr MacAddr::parse(std::string_view text) {
  auto mac = try_parse(text);
  if (!mac) throw ConfigError("", "invalid MAC address '" + std::string(text) + "'");
  return *mac;
}

std::string MacAddr::to_string() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(17);
  for (int i = 0; i < 6; ++i) {
    if (i) s += ':';
    s += digits[b[i] >> 4];
    s += digits[b[i] & 0xF];
  }
  return s;
}

std::optional<Subnet> Subnet::try_parse(std::string_view text) {
  Subnet sn;
  std::size_t slash = text.find('/');
  std::string_view addr = slash == std::string_view::npos ? text : text.substr(0, slash);
  auto base = IpAddr::try_parse(addr);
  if (!base) return std::nullopt;
  sn.base = *base;
  if (slash != std::string_view::npos) {
    std::string_view p = text.substr(slash + 1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(p.begin(), p.end(), v);
    if (ec != std::errc() || ptr != p.end() || v < 0 || v > 32) return std::nullopt;
    sn.prefix = v;
  }
  return sn;
}

Subnet Subnet::parse(std::string_view text) {
  auto sn = try_parse(text);
  if (!sn) throw ConfigError("", "invalid subnet '" + std::string(text) + "'");
  return *sn;
}

std::string Subnet::to_string() const {
  return base.to_string() + "/" + std::to_string(prefix);
}

}  // namespace algsim
