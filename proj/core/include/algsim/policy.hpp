#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "algsim/addr.hpp"
#include "algsim/file_kind.hpp"
#include "algsim/frame.hpp"
#include "algsim/pattern.hpp"
#include "algsim/vtime.hpp"

namespace algsim {

enum class PortAction { Allow, Deny };

struct PortRule {
  IpProto proto = IpProto::Tcp;
  std::uint16_t dst_port = 0;
  PortAction action = PortAction::Deny;
};

struct ContentRoute {
  std::uint16_t ingress_port = 0;
  IpAddr allowed_src_ip;
  FileKind required_kind = FileKind::Unknown;
  IpAddr dest_ip;
  std::uint16_t dest_port = 0;
};

enum class HeaderMode { Strict, LastWins };
enum class SpoofAuthMode { AddressOnly, Token };
enum class FtpScanMode { Off, On };

struct FtpScanConfig {
  FtpScanMode mode = FtpScanMode::Off;
  std::shared_ptr<const Pattern> pattern;
  RegexEngine engine = RegexEngine::Budgeted;
};

struct BandwidthConfig {
  std::int64_t rate_per_min = 0;
  std::int64_t burst = 0;
};

struct PerformanceConfig {
  std::int64_t capacity_rpm = 0;
  std::int64_t max_acceptable_latency_ms = 0;
};

struct PolicySet {
  bool isolation_default_deny = true;
  std::set<IpAddr> ip_whitelist;
  std::set<MacAddr> mac_whitelist;
  std::map<IpAddr, MacAddr> static_arp;
  std::set<std::string> allowed_protocols;
  std::vector<PortRule> port_rules;
  std::vector<ContentRoute> content_routes;
  std::vector<std::shared_ptr<const Pattern>> url_blocklist;
  RegexEngine url_engine = RegexEngine::Budgeted;
  std::int64_t regex_budget = 65536;
  std::set<std::string> author_whitelist;
  std::set<std::string> ftp_blocked_verbs;
  FtpScanConfig ftp_scan;
  HeaderMode header_mode = HeaderMode::Strict;
  SpoofAuthMode spoof_auth = SpoofAuthMode::AddressOnly;
  std::map<IpAddr, std::string> auth_tokens;
  std::optional<BandwidthConfig> bandwidth;
  PerformanceConfig performance;

  const ContentRoute* find_route(std::uint16_t ingress_port,
                                 const IpAddr& src_ip) const;
  bool is_route_ingress_port(std::uint16_t port) const;
};

// Parses and fully validates a policy document. Unknown keys are rejected.
// Throws ConfigError carrying a JSON-pointer-ish path.
PolicySet load_policy(std::string_view json_bytes);

// Integer-exact token bucket over virtual time. Starts full. Refill
// accumulates ns * rate_per_min and converts whole tokens at 60e9 ns each,
// so rates like 100000 per virtual minute admit exactly on the dot.
class TokenBucket {
 public:
  TokenBucket(std::int64_t rate_per_min, std::int64_t burst);

  // Consumes one token for the frame at `now`; false when the bucket is
  // empty. `now` must not go backwards.
  bool admit(VirtualTime now);
  std::int64_t tokens() const { return tokens_; }

 private:
  std::int64_t rate_per_min_;
  std::int64_t burst_;
  std::int64_t tokens_;
  std::int64_t acc_;
  VirtualTime last_;
};

enum class DecisionKind { Allow, Deny, ForwardToInspector };
enum class InspectorKind { Http, Ftp };

struct Decision {
  DecisionKind kind = DecisionKind::Deny;
  std::string reason;
  std::string cwe;
  InspectorKind inspector = InspectorKind::Http;

  static Decision allow();
  static Decision deny(std::string reason, std::string cwe);
  static Decision inspect(InspectorKind inspector);
};

// The ALG's L3 verdict for an IPv4 frame. Checks run in a fixed order:
// source-IP whitelist, source-MAC whitelist, auth token (Token mode),
// allowed protocols, port rules (first match wins), bandwidth bucket, then
// inspector dispatch for TCP ports bound to HTTP or FTP. `bucket` may be
// null when no bandwidth limit is configured. `alg_ips` are the gateway's
// own addresses; HTTP inspection applies only to them.
Decision decide_l3(const PolicySet& policy, const Frame& frame,
                   VirtualTime now, TokenBucket* bucket,
                   const std::set<IpAddr>& alg_ips);

enum class ArpEvent { Ignored, PoisonRejected, Replied };

struct ArpOutcome {
  ArpEvent event = ArpEvent::Ignored;
  std::optional<ArpMessage> reply;
  // The ARP table after the message: always identical to the input table
  // (static-only mode never learns).
  std::map<IpAddr, MacAddr> table;
};

// Applies an ARP message against the static table. A sender binding that
// contradicts the policy's static_arp is a poisoning attempt and is
// rejected. Replies are generated only for requests that ask for one of
// the gateway's own IPs.
ArpOutcome handle_arp(const PolicySet& policy,
                      const std::map<IpAddr, MacAddr>& table,
                      const ArpMessage& msg, const std::set<IpAddr>& alg_ips,
                      const MacAddr& alg_mac);

}  // namespace algsim
