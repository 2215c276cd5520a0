#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace algsim {

using VlanId = std::uint16_t;

struct IpAddr {
  std::array<std::uint8_t, 4> b{};

  static std::optional<IpAddr> try_parse(std::string_view text);
  // Throws ConfigError on malformed input.
  static IpAddr parse(std::string_view text);
  std::string to_string() const;

  std::uint32_t value() const {
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
  }

  auto operator<=>(const IpAddr&) const = default;
};

struct MacAddr {
  std::array<std::uint8_t, 6> b{};

  static std::optional<MacAddr> try_parse(std::string_view text);
  static MacAddr parse(std::string_view text);
  // Canonical form: lowercase, colon-separated. Parsing accepts either case,
  // so value -> text -> value is lossless.
  std::string to_string() const;

  static MacAddr broadcast() { return MacAddr{{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}}; }
  bool is_broadcast() const { return *this == broadcast(); }

  auto operator<=>(const MacAddr&) const = default;
};

struct Subnet {
  IpAddr base{};
  int prefix = 24;

  // Accepts "a.b.c.d/nn" or a bare address (implies /24).
  static std::optional<Subnet> try_parse(std::string_view text);
  static Subnet parse(std::string_view text);
  std::string to_string() const;

  bool contains(const IpAddr& ip) const {
    if (prefix <= 0) return true;
    std::uint32_t mask = prefix >= 32 ? 0xFFFFFFFFu : ~((1u << (32 - prefix)) - 1u);
    return (ip.value() & mask) == (base.value() & mask);
  }

  auto operator<=>(const Subnet&) const = default;
};

}  // namespace algsim
