#include <string>

#include "doctest.h"

#include "algsim/addr.hpp"
#include "algsim/errors.hpp"
#include "algsim/frame.hpp"
#include "algsim/rng.hpp"

using namespace algsim;

TEST_CASE("ipv4 text round-trip is lossless") {
  for (const char* text : {"10.10.10.2", "0.0.0.0", "255.255.255.255",
                           "192.168.1.1"}) {
    IpAddr ip = IpAddr::parse(text);
    CHECK(ip.to_string() == text);
  }
}

TEST_CASE("ipv4 parse rejects malformed text") {
  for (const char* text : {"", "10.10.10", "1.2.3.4.5", "256.1.1.1",
                           "10.10.10.2 ", "a.b.c.d", "10..10.2"}) {
    CAPTURE(text);
    CHECK_FALSE(IpAddr::try_parse(text).has_value());
  }
  CHECK_THROWS_AS(IpAddr::parse("not-an-ip"), ConfigError);
}

TEST_CASE("ipv4 comparison is byte-wise") {
  CHECK(IpAddr::parse("10.10.10.2") < IpAddr::parse("10.10.20.1"));
  CHECK(IpAddr::parse("9.255.255.255") < IpAddr::parse("10.0.0.0"));
  CHECK(IpAddr::parse("10.10.10.2") == IpAddr::parse("10.10.10.2"));
}

TEST_CASE("mac text round-trip is lossless and canonicalizes case") {
  MacAddr mac = MacAddr::parse("02:00:00:00:0a:02");
  CHECK(mac.to_string() == "02:00:00:00:0a:02");
  CHECK(MacAddr::parse("02:00:00:00:0A:02") == mac);
  CHECK(MacAddr::parse("FF:FF:FF:FF:FF:FF").is_broadcast());
  CHECK_FALSE(mac.is_broadcast());
}

TEST_CASE("mac parse rejects malformed text") {
  for (const char* text : {"", "02:00:00:00:0a", "02:00:00:00:0a:02:03",
                           "02-00-00-00-0a-02", "0g:00:00:00:00:00"}) {
    CAPTURE(text);
    CHECK_FALSE(MacAddr::try_parse(text).has_value());
  }
}

TEST_CASE("subnet parses with and without prefix") {
  Subnet s = Subnet::parse("10.10.10.0/24");
  CHECK(s.contains(IpAddr::parse("10.10.10.7")));
  CHECK_FALSE(s.contains(IpAddr::parse("10.10.11.7")));

  Subnet bare = Subnet::parse("10.10.20.0");
  CHECK(bare.prefix == 24);
  CHECK(bare.contains(IpAddr::parse("10.10.20.255")));
}

TEST_CASE("frame invariants") {
  Frame frame;
  frame.src_mac = MacAddr::parse("02:00:00:00:0a:02");
  frame.dst_mac = MacAddr::parse("02:00:00:00:0a:03");

  SUBCASE("arp frames carry no ip header") {
    frame.kind = FrameKind::Arp;
    frame.payload = serialize_arp(ArpMessage{});
    CHECK_NOTHROW(validate_frame(frame, 65535));
    frame.ip = IpHeader{};
    CHECK_THROWS_AS(validate_frame(frame, 65535), FrameError);
  }

  SUBCASE("ipv4 frames require an ip header") {
    frame.kind = FrameKind::Ipv4;
    CHECK_THROWS_AS(validate_frame(frame, 65535), FrameError);
    frame.ip = IpHeader{IpAddr::parse("10.0.0.1"), IpAddr::parse("10.0.0.2"),
                        IpProto::Tcp};
    frame.l4 = L4Header{1, 2};
    CHECK_NOTHROW(validate_frame(frame, 65535));
  }

  SUBCASE("icmp carries no ports") {
    frame.kind = FrameKind::Ipv4;
    frame.ip = IpHeader{IpAddr::parse("10.0.0.1"), IpAddr::parse("10.0.0.2"),
                        IpProto::Icmp};
    CHECK_NOTHROW(validate_frame(frame, 65535));
    frame.l4 = L4Header{1, 2};
    CHECK_THROWS_AS(validate_frame(frame, 65535), FrameError);
  }

  SUBCASE("payload must fit the mtu") {
    frame.kind = FrameKind::Ipv4;
    frame.ip = IpHeader{IpAddr::parse("10.0.0.1"), IpAddr::parse("10.0.0.2"),
                        IpProto::Icmp};
    frame.payload = std::string(100, 'x');
    CHECK_NOTHROW(validate_frame(frame, 100));
    frame.payload.push_back('x');
    CHECK_THROWS_AS(validate_frame(frame, 100), FrameError);
  }
}

TEST_CASE("arp wire form round-trips") {
  ArpMessage msg;
  msg.op = ArpOp::Reply;
  msg.sender_ip = IpAddr::parse("10.10.20.5");
  msg.sender_mac = MacAddr::parse("02:00:00:00:14:05");
  msg.target_ip = IpAddr::parse("10.10.20.1");
  msg.target_mac = MacAddr::parse("02:00:00:00:0b:01");

  std::string wire = serialize_arp(msg);
  CHECK(wire.size() == 21);
  CHECK(parse_arp(wire) == msg);
}

TEST_CASE("arp parse rejects short or corrupt payloads") {
  std::string wire = serialize_arp(ArpMessage{});
  CHECK_THROWS_AS(parse_arp(wire.substr(0, 20)), FrameError);
  CHECK_THROWS_AS(parse_arp(""), FrameError);
  std::string bad_op = wire;
  bad_op[0] = 9;
  CHECK_THROWS_AS(parse_arp(bad_op), FrameError);
}

TEST_CASE("arp round-trip holds for generated messages") {
  SplitMix64 rng(0x41525021);
  for (int i = 0; i < 1000; ++i) {
    ArpMessage msg;
    msg.op = rng.chance(1, 2) ? ArpOp::Request : ArpOp::Reply;
    for (auto& b : msg.sender_ip.b) b = static_cast<std::uint8_t>(rng.below(256));
    for (auto& b : msg.target_ip.b) b = static_cast<std::uint8_t>(rng.below(256));
    for (auto& b : msg.sender_mac.b) b = static_cast<std::uint8_t>(rng.below(256));
    for (auto& b : msg.target_mac.b) b = static_cast<std::uint8_t>(rng.below(256));
    CHECK(parse_arp(serialize_arp(msg)) == msg);
  }
}
