#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algsim/frame.hpp"
#include "algsim/net_config.hpp"
#include "algsim/policy.hpp"

namespace algsim {

// What the gateway decided to do with one serviced frame. Exactly one of
// three terminal states holds for the original frame: it continues as
// `forward` (same identity on the wire), it was consumed by the gateway
// itself (`consumed`, e.g. an answered ARP request), or it was dropped with
// `drop_reason`. Gateway-generated frames (rejection responses, ARP
// replies, forwarded smuggled sub-requests) are new frames; each carries
// the VLAN it must be emitted into in its `ingress_vlan` field.
struct AlgOutput {
  std::optional<Frame> forward;
  bool consumed = false;
  std::string drop_reason;
  std::string drop_cwe;
  std::vector<Frame> responses;
  std::vector<Frame> extra_forwards;
  std::int64_t regex_steps = 0;
  std::vector<std::string> notes;
};

// Per-gateway stateful enforcement pipeline: L3 policy decision, ARP
// handling against the static table, and the HTTP/FTP inspectors. One
// instance belongs to one Network and is not thread-safe; the policy and
// network config it references must outlive it.
class AlgPipeline {
 public:
  AlgPipeline(const NetworkConfig* net, const PolicySet* policy);

  AlgOutput process(const Frame& frame, VirtualTime now);

  std::int64_t poison_rejections() const { return poison_rejections_; }
  const std::map<IpAddr, MacAddr>& arp_table() const { return arp_table_; }

 private:
  AlgOutput process_arp(const Frame& frame);
  AlgOutput inspect_http(const Frame& frame, AlgOutput out);
  AlgOutput inspect_ftp(const Frame& frame, AlgOutput out);
  AlgOutput forward_plain(const Frame& frame, AlgOutput out);

  Frame reply_to_sender(const Frame& in, std::string payload) const;
  std::optional<Frame> toward_ip(const Frame& in, const IpAddr& dst_ip,
                                 std::uint16_t dst_port, std::string payload,
                                 std::string* fail) const;

  const NetworkConfig* net_;
  const PolicySet* policy_;
  std::set<IpAddr> alg_ips_;
  std::map<IpAddr, MacAddr> arp_table_;
  std::optional<TokenBucket> bucket_;
  std::int64_t poison_rejections_ = 0;
};

}  // namespace algsim
