#include <string>

#include "doctest.h"

#include "algsim/errors.hpp"
#include "algsim/net_config.hpp"
#include "algsim/netsim.hpp"
#include "test_util.hpp"

using namespace algsim;

namespace {

// The five-host layout the simulator defaults to: three clients in the
// control VLAN, the document and FTP/MPEG servers in the multimedia VLAN,
// and the gateway additionally attached to an otherwise empty third VLAN.
const char* kFiveHostJson = R"({
  "schema_version": 1,
  "vlans": [
    {"id": 10, "subnet": "10.10.10.0/24"},
    {"id": 11, "subnet": "10.10.11.0/24"},
    {"id": 20, "subnet": "10.10.20.0/24"}
  ],
  "hosts": [
    {"name": "client-ftp", "ip": "10.10.10.2", "mac": "02:00:00:00:0a:02", "vlan": 10},
    {"name": "client-mpeg", "ip": "10.10.10.3", "mac": "02:00:00:00:0a:03", "vlan": 10},
    {"name": "client-doc", "ip": "10.10.10.4", "mac": "02:00:00:00:0a:04", "vlan": 10},
    {"name": "server-doc", "ip": "10.10.20.3", "mac": "02:00:00:00:14:03", "vlan": 20},
    {"name": "server-ftp-mpeg", "ip": "10.10.20.5", "mac": "02:00:00:00:14:05", "vlan": 20}
  ],
  "alg": {
    "mac": "02:00:00:00:0b:01",
    "ip_by_vlan": {"10": "10.10.10.1", "11": "10.10.11.1", "20": "10.10.20.1"},
    "base_service_cost_ms": 39.0,
    "per_byte_cost_ms": 0.0,
    "regex_step_cost_ms": 0.001
  }
})";

std::string patched(const std::string& doc, const std::string& needle,
                    const std::string& replacement) {
  std::string out = doc;
  auto at = out.find(needle);
  REQUIRE(at != std::string::npos);
  out.replace(at, needle.size(), replacement);
  return out;
}

}  // namespace

TEST_CASE("five-host default topology loads with three vlans") {
  NetworkConfig net = load_network_config(kFiveHostJson);
  CHECK(net.vlans.size() == 3);
  CHECK(net.hosts.size() == 5);
  CHECK(net.alg.ip_by_vlan.size() == 3);
  CHECK(net.mtu == 65535);

  const PolicySet policy = load_policy(R"({
    "schema_version": 1,
    "isolation_default_deny": true,
    "ip_whitelist": [],
    "mac_whitelist": [],
    "static_arp": {},
    "allowed_protocols": ["icmp"],
    "port_rules": [],
    "content_routes": [],
    "url_blocklist": [],
    "author_whitelist": [],
    "ftp_blocked_verbs": [],
    "ftp_scan": {"mode": "off"},
    "header_mode": "strict",
    "spoof_auth": {"mode": "address_only"},
    "performance": {"capacity_rpm": 1500, "max_acceptable_latency_ms": 50}
  })");
  Network network(net, policy);
  CHECK(network.now() == 0);
  CHECK(network.trace().empty());
}

TEST_CASE("duplicate host ip is a config error") {
  std::string doc = patched(kFiveHostJson, "10.10.20.5", "10.10.20.3");
  CHECK_THROWS_AS(load_network_config(doc), ConfigError);
}

TEST_CASE("duplicate host name is a config error") {
  std::string doc = patched(kFiveHostJson, "server-ftp-mpeg", "server-doc");
  CHECK_THROWS_AS(load_network_config(doc), ConfigError);
}

TEST_CASE("duplicate host mac is a config error") {
  std::string doc =
      patched(kFiveHostJson, "02:00:00:00:14:05", "02:00:00:00:14:03");
  CHECK_THROWS_AS(load_network_config(doc), ConfigError);
}

TEST_CASE("zero hosts is a valid empty network") {
  std::string doc = R"({
    "schema_version": 1,
    "vlans": [{"id": 1, "subnet": "10.0.1.0/24"}],
    "hosts": [],
    "alg": {
      "mac": "02:00:00:00:ff:01",
      "ip_by_vlan": {"1": "10.0.1.1"},
      "base_service_cost_ms": 1.0,
      "per_byte_cost_ms": 0.0,
      "regex_step_cost_ms": 0.0
    }
  })";
  NetworkConfig net = load_network_config(doc);
  CHECK(net.hosts.empty());

  PolicySet policy = testu::open_policy();
  policy.static_arp.clear();
  Network network(net, policy);
  network.run_until_idle();
  CHECK(network.events_processed() == 0);
}

TEST_CASE("static arp entries must name configured hosts") {
  NetworkConfig net = load_network_config(kFiveHostJson);
  PolicySet policy = testu::open_policy();
  policy.static_arp.clear();
  policy.static_arp[IpAddr::parse("10.10.10.2")] =
      MacAddr::parse("02:00:00:00:0a:02");
  CHECK_NOTHROW(Network(net, policy));

  policy.static_arp[IpAddr::parse("10.10.99.9")] =
      MacAddr::parse("02:00:00:00:0a:99");
  CHECK_THROWS_AS(Network(net, policy), ConfigError);
}

TEST_CASE("host outside its vlan subnet is a config error") {
  std::string doc = patched(kFiveHostJson, "\"ip\": \"10.10.10.2\"",
                            "\"ip\": \"10.10.99.2\"");
  CHECK_THROWS_AS(load_network_config(doc), ConfigError);
}

TEST_CASE("host referencing an unknown vlan is a config error") {
  std::string doc = patched(kFiveHostJson, "\"vlan\": 20},\n    {\"name\": \"server-ftp-mpeg\"",
                            "\"vlan\": 99},\n    {\"name\": \"server-ftp-mpeg\"");
  CHECK_THROWS_AS(load_network_config(doc), ConfigError);
}

TEST_CASE("gateway must be attached to every vlan") {
  std::string doc = patched(kFiveHostJson, "\"11\": \"10.10.11.1\", ", "");
  CHECK_THROWS_AS(load_network_config(doc), ConfigError);
}

TEST_CASE("overlapping vlan subnets are a config error") {
  std::string doc = patched(kFiveHostJson, "10.10.11.0/24", "10.10.10.0/25");
  CHECK_THROWS_AS(load_network_config(doc), ConfigError);
}

TEST_CASE("gateway ip colliding with a host ip is a config error") {
  std::string doc = patched(kFiveHostJson, "\"10\": \"10.10.10.1\"",
                            "\"10\": \"10.10.10.2\"");
  CHECK_THROWS_AS(load_network_config(doc), ConfigError);
}

TEST_CASE("unknown keys and wrong schema versions are rejected") {
  CHECK_THROWS_AS(
      load_network_config(patched(kFiveHostJson, "\"schema_version\": 1",
                                  "\"schema_version\": 2")),
      ConfigError);
  CHECK_THROWS_AS(
      load_network_config(patched(kFiveHostJson, "\"schema_version\": 1",
                                  "\"schema_version\": 1, \"extra\": true")),
      ConfigError);
  CHECK_THROWS_AS(load_network_config("not json"), ConfigError);
  CHECK_THROWS_AS(load_network_config("{}"), ConfigError);
}

TEST_CASE("lookup accessors") {
  NetworkConfig net = load_network_config(kFiveHostJson);
  REQUIRE(net.host_by_name("client-doc") != nullptr);
  CHECK(net.host_by_name("client-doc")->ip == IpAddr::parse("10.10.10.4"));
  CHECK(net.host_by_name("nobody") == nullptr);
  REQUIRE(net.host_by_ip(IpAddr::parse("10.10.20.3")) != nullptr);
  CHECK(net.host_by_ip(IpAddr::parse("10.10.20.3"))->name == "server-doc");
  CHECK(net.host_by_mac(MacAddr::parse("02:00:00:00:0a:03"))->name ==
        "client-mpeg");
  CHECK(net.vlan_of_ip(IpAddr::parse("10.10.11.200")) == VlanId{11});
  CHECK_FALSE(net.vlan_of_ip(IpAddr::parse("172.16.0.1")).has_value());
  CHECK(net.alg_ip_set().size() == 3);
  CHECK(net.alg_ip_set().count(IpAddr::parse("10.10.20.1")) == 1);
}

TEST_CASE("golden network file matches the documented layout") {
  const NetworkConfig& net = testu::golden_network();
  CHECK(net.vlans.size() == 3);
  CHECK(net.hosts.size() == 8);
  CHECK(net.alg.base_service_cost == 39'000'000);
  CHECK(net.alg.per_byte_cost == 0);
  CHECK(net.alg.regex_step_cost == 1000);
}
