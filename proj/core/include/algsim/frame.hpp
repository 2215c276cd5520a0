#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "algsim/addr.hpp"

namespace algsim {

enum class FrameKind { Arp, Ipv4 };
enum class IpProto { Icmp, Tcp, Udp };

std::string_view ip_proto_name(IpProto proto);

struct IpHeader {
  IpAddr src;
  IpAddr dst;
  IpProto proto = IpProto::Tcp;
};

struct L4Header {
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
};

// One simulated Ethernet frame. A frame carries a whole application message
// in `payload` (the testbed does not model TCP segmentation). `auth_token`
// is the per-host shared secret presented under token-based source
// authentication; it is empty when the sender presents none.
struct Frame {
  MacAddr src_mac;
  MacAddr dst_mac;
  FrameKind kind = FrameKind::Ipv4;
  std::optional<IpHeader> ip;
  std::optional<L4Header> l4;
  std::string payload;
  VlanId ingress_vlan = 0;
  std::string auth_token;
};

// Structural invariants: ARP frames carry no IP header, IPv4 frames carry
// one, ICMP has no L4 ports, payload fits the MTU. Throws FrameError.
void validate_frame(const Frame& frame, std::size_t mtu);

enum class ArpOp : std::uint8_t { Request = 1, Reply = 2 };

struct ArpMessage {
  ArpOp op = ArpOp::Request;
  IpAddr sender_ip;
  MacAddr sender_mac;
  IpAddr target_ip;
  MacAddr target_mac;

  bool operator==(const ArpMessage&) const = default;
};

// 21-byte wire encoding: op, sender ip, sender mac, target ip, target mac.
std::string serialize_arp(const ArpMessage& msg);
// Throws FrameError on a short or malformed payload.
ArpMessage parse_arp(std::string_view payload);

}  // namespace algsim
