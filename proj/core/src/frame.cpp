#include "algsim/frame.hpp"

#include <cstring>

#include "algsim/errors.hpp"

namespace algsim {

std::string_view ip_proto_name(IpProto proto) {
  switch (proto) {
    case IpProto::Icmp:
      return "icmp";
    case IpProto::Tcp:
      return "tcp";
    case IpProto::Udp:
      return "udp";
  }
  return "?";
}

void validate_frame(const Frame& frame, std::size_t mtu) {
  if (frame.kind == FrameKind::Arp) {
    if (frame.ip.has_value()) {
      throw FrameError("arp frame must not carry an ip header");
    }
    if (frame.l4.has_value()) {
      throw FrameError("arp frame must not carry l4 ports");
    }
  } else {
    if (!frame.ip.has_value()) {
      throw FrameError("ipv4 frame missing ip header");
    }
    if (frame.ip->proto == IpProto::Icmp) {
      if (frame.l4.has_value()) {
        throw FrameError("icmp frame must not carry l4 ports");
      }
    } else if (!frame.l4.has_value()) {
      throw FrameError("tcp/udp frame missing l4 ports");
    }
  }
  if (frame.payload.size() > mtu) {
    throw FrameError("payload of " + std::to_string(frame.payload.size()) +
                     " bytes exceeds mtu " + std::to_string(mtu));
  }
}

std::string serialize_arp(const ArpMessage& msg) {
  std::string out;
  out.reserve(21);
  out.push_back(static_cast<char>(msg.op));
  for (auto b : msg.sender_ip.b) out.push_back(static_cast<char>(b));
  for (auto b : msg.sender_mac.b) out.push_back(static_cast<char>(b));
  for (auto b : msg.target_ip.b) out.push_back(static_cast<char>(b));
  for (auto b : msg.target_mac.b) out.push_back(static_cast<char>(b));
  return out;
}

ArpMessage parse_arp(std::string_view payload) {
  if (payload.size() != 21) {
    throw FrameError("arp payload must be 21 bytes, got " +
                     std::to_string(payload.size()));
  }
  auto byte_at = [&](std::size_t i) {
    return static_cast<std::uint8_t>(payload[i]);
  };
  ArpMessage msg;
  const std::uint8_t op = byte_at(0);
  if (op != 1 && op != 2) {
    throw FrameError("arp op must be 1 or 2, got " + std::to_string(op));
  }
  msg.op = static_cast<ArpOp>(op);
  std::size_t pos = 1;
  for (auto& b : msg.sender_ip.b) b = byte_at(pos++);
  for (auto& b : msg.sender_mac.b) b = byte_at(pos++);
  for (auto& b : msg.target_ip.b) b = byte_at(pos++);
  for (auto& b : msg.target_mac.b) b = byte_at(pos++);
  return msg;
}

}  // namespace algsim
