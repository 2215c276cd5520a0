#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "algsim/addr.hpp"
#include "algsim/vtime.hpp"

namespace algsim {

struct VlanConfig {
  VlanId id = 0;
  Subnet subnet;
};

struct HostConfig {
  std::string name;
  IpAddr ip;
  MacAddr mac;
  VlanId vlan = 0;
};

// The gateway sits on every VLAN with one IP per attachment. Service cost
// of one frame is base + per_byte * payload_size + regex_step * steps, all
// in virtual nanoseconds (the JSON schema expresses them in virtual ms).
struct AlgConfig {
  MacAddr mac;
  std::map<VlanId, IpAddr> ip_by_vlan;
  VirtualTime base_service_cost = 0;
  VirtualTime per_byte_cost = 0;
  VirtualTime regex_step_cost = 0;
};

struct NetworkConfig {
  std::vector<VlanConfig> vlans;
  std::vector<HostConfig> hosts;
  AlgConfig alg;
  std::size_t mtu = 65535;

  const HostConfig* host_by_name(std::string_view name) const;
  const HostConfig* host_by_ip(const IpAddr& ip) const;
  const HostConfig* host_by_mac(const MacAddr& mac) const;
  const VlanConfig* vlan_by_id(VlanId id) const;
  // The VLAN whose subnet contains `ip`, if any.
  std::optional<VlanId> vlan_of_ip(const IpAddr& ip) const;
  std::set<IpAddr> alg_ip_set() const;

  // Checks all structural invariants (unique addresses and names, hosts
  // inside their VLAN subnets, gateway attached to every VLAN, disjoint
  // subnets). Throws ConfigError naming the violated invariant.
  void validate() const;
};

// Parses and validates a network document. Unknown keys are rejected.
NetworkConfig load_network_config(std::string_view json_bytes);

}  // namespace algsim
