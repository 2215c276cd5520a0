#include <cstdint>
#include <string>

#include <benchmark/benchmark.h>

#include "algsim/net_config.hpp"
#include "algsim/netsim.hpp"
#include "algsim/policy.hpp"
#include "algsim/vtime.hpp"

namespace {

const char kNetworkJson[] = R"({
  "schema_version": 1,
  "vlans": [{"id": 1, "subnet": "10.0.1.0/24"}, {"id": 2, "subnet": "10.0.2.0/24"}],
  "hosts": [
    {"name": "gen", "ip": "10.0.1.2", "mac": "02:00:00:00:01:02", "vlan": 1},
    {"name": "sink", "ip": "10.0.2.2", "mac": "02:00:00:00:02:02", "vlan": 2}
  ],
  "alg": {
    "mac": "02:00:00:00:ff:01",
    "ip_by_vlan": {"1": "10.0.1.1", "2": "10.0.2.1"},
    "base_service_cost_ms": 0.5,
    "per_byte_cost_ms": 0.0,
    "regex_step_cost_ms": 0.0
  }
})";

const char kPolicyJson[] = R"({
  "schema_version": 1,
  "isolation_default_deny": false,
  "ip_whitelist": [],
  "mac_whitelist": [],
  "static_arp": {"10.0.1.2": "02:00:00:00:01:02", "10.0.2.2": "02:00:00:00:02:02"},
  "allowed_protocols": ["icmp", "tcp", "udp"],
  "port_rules": [],
  "content_routes": [],
  "url_blocklist": [],
  "author_whitelist": [],
  "ftp_blocked_verbs": [],
  "ftp_scan": {"mode": "off"},
  "header_mode": "last_wins",
  "spoof_auth": {"mode": "address_only"},
  "performance": {"capacity_rpm": 100000, "max_acceptable_latency_ms": 50}
})";

void BM_GatewayForwarding(benchmark::State& state) {
  const algsim::NetworkConfig net = algsim::load_network_config(kNetworkJson);
  const algsim::PolicySet policy = algsim::load_policy(kPolicyJson);
  const algsim::HostConfig* gen = net.host_by_name("gen");
  const algsim::HostConfig* sink = net.host_by_name("sink");
  const std::int64_t frames = state.range(0);

  std::int64_t events = 0;
  for (auto _ : state) {
    algsim::Network network(net, policy,
                            algsim::NetworkOptions{false, false, 10'000'000});
    for (std::int64_t k = 0; k < frames; ++k) {
      algsim::Frame frame;
      frame.src_mac = gen->mac;
      frame.dst_mac = net.alg.mac;
      frame.kind = algsim::FrameKind::Ipv4;
      frame.ip = algsim::IpHeader{gen->ip, sink->ip, algsim::IpProto::Tcp};
      frame.l4 = algsim::L4Header{40000, 40000};
      frame.payload = "x";
      network.inject_frame("gen", frame, k * algsim::kNsPerMs);
    }
    network.run_until_idle();
    events = static_cast<std::int64_t>(network.events_processed());
  }
  state.counters["events"] = static_cast<double>(events);
  state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_GatewayForwarding)->Range(256, 16384);

}  // namespace
