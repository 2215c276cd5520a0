#include "algsim/net_config.hpp"

#include <cmath>

#include "algsim/errors.hpp"
#include "json_util.hpp"

namespace algsim {

namespace {

using jsonu::json;

IpAddr parse_ip_at(const json& v, const std::string& path) {
  auto ip = IpAddr::try_parse(jsonu::as_string(v, path));
  if (!ip) throw ConfigError(path, "not a dotted-quad IPv4 address");
  return *ip;
}

MacAddr parse_mac_at(const json& v, const std::string& path) {
  auto mac = MacAddr::try_parse(jsonu::as_string(v, path));
  if (!mac) throw ConfigError(path, "not a colon-separated MAC address");
  return *mac;
}

VlanId parse_vlan_at(const json& v, const std::string& path) {
  const std::int64_t n = jsonu::as_int(v, path);
  if (n < 1 || n > 4094) throw ConfigError(path, "vlan id out of range 1..4094");
  return static_cast<VlanId>(n);
}

VirtualTime parse_cost_ms_at(const json& v, const std::string& path) {
  const double ms = jsonu::as_number(v, path);
  if (!(ms >= 0.0) || ms > 3.6e6) {
    throw ConfigError(path, "cost must be in 0..3.6e6 virtual ms");
  }
  return vt_from_ms(ms);
}

bool valid_host_name(const std::string& name) {
  if (name.empty() || name == "alg") return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

const HostConfig* NetworkConfig::host_by_name(std::string_view name) const {
  for (const HostConfig& h : hosts) {
    if (h.name == name) return &h;
  }
  return nullptr;
}

const HostConfig* NetworkConfig::host_by_ip(const IpAddr& ip) const {
  for (const HostConfig& h : hosts) {
    if (h.ip == ip) return &h;
  }
  return nullptr;
}

const HostConfig* NetworkConfig::host_by_mac(const MacAddr& mac) const {
  for (const HostConfig& h : hosts) {
    if (h.mac == mac) return &h;
  }
  return nullptr;
}

const VlanConfig* NetworkConfig::vlan_by_id(VlanId id) const {
  for (const VlanConfig& v : vlans) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

std::optional<VlanId> NetworkConfig::vlan_of_ip(const IpAddr& ip) const {
  for (const VlanConfig& v : vlans) {
    if (v.subnet.contains(ip)) return v.id;
  }
  return std::nullopt;
}

std::set<IpAddr> NetworkConfig::alg_ip_set() const {
  std::set<IpAddr> ips;
  for (const auto& [vlan, ip] : alg.ip_by_vlan) ips.insert(ip);
  return ips;
}

void NetworkConfig::validate() const {
  std::set<VlanId> vlan_ids;
  for (const VlanConfig& v : vlans) {
    if (!vlan_ids.insert(v.id).second) {
      throw ConfigError("", "duplicate vlan id " + std::to_string(v.id));
    }
  }
  for (std::size_t i = 0; i < vlans.size(); ++i) {
    for (std::size_t j = i + 1; j < vlans.size(); ++j) {
      if (vlans[i].subnet.contains(vlans[j].subnet.base) ||
          vlans[j].subnet.contains(vlans[i].subnet.base)) {
        throw ConfigError("", "vlan subnets " + vlans[i].subnet.to_string() +
                                  " and " + vlans[j].subnet.to_string() +
                                  " overlap");
      }
    }
  }

  std::set<std::string> names;
  std::set<IpAddr> ips;
  std::set<MacAddr> macs;
  for (const HostConfig& h : hosts) {
    if (!valid_host_name(h.name)) {
      throw ConfigError("", "invalid host name '" + h.name + "'");
    }
    if (!names.insert(h.name).second) {
      throw ConfigError("", "duplicate host name '" + h.name + "'");
    }
    if (!ips.insert(h.ip).second) {
      throw ConfigError("", "duplicate host ip " + h.ip.to_string());
    }
    if (!macs.insert(h.mac).second) {
      throw ConfigError("", "duplicate host mac " + h.mac.to_string());
    }
    const VlanConfig* vlan = vlan_by_id(h.vlan);
    if (vlan == nullptr) {
      throw ConfigError("", "host '" + h.name + "' references unknown vlan " +
                                std::to_string(h.vlan));
    }
    if (!vlan->subnet.contains(h.ip)) {
      throw ConfigError("", "host '" + h.name + "' ip " + h.ip.to_string() +
                                " is outside subnet " +
                                vlan->subnet.to_string());
    }
  }

  if (macs.count(alg.mac)) {
    throw ConfigError("", "gateway mac collides with a host mac");
  }
  for (const VlanConfig& v : vlans) {
    auto it = alg.ip_by_vlan.find(v.id);
    if (it == alg.ip_by_vlan.end()) {
      throw ConfigError("", "gateway is not attached to vlan " +
                                std::to_string(v.id));
    }
    if (!v.subnet.contains(it->second)) {
      throw ConfigError("", "gateway ip " + it->second.to_string() +
                                " is outside subnet " + v.subnet.to_string());
    }
    if (ips.count(it->second)) {
      throw ConfigError("", "gateway ip " + it->second.to_string() +
                                " collides with a host ip");
    }
  }
  for (const auto& [vlan, ip] : alg.ip_by_vlan) {
    if (vlan_by_id(vlan) == nullptr) {
      throw ConfigError("", "gateway attachment references unknown vlan " +
                                std::to_string(vlan));
    }
  }
  if (mtu < 1) {
    throw ConfigError("", "mtu must be at least 1");
  }
}

NetworkConfig load_network_config(std::string_view json_bytes) {
  const json doc = jsonu::parse_document(json_bytes, "network document");
  jsonu::reject_unknown_keys(doc, "",
                             {"schema_version", "vlans", "hosts", "alg",
                              "mtu"});
  if (jsonu::as_int(jsonu::require(doc, "", "schema_version"),
                    "/schema_version") != 1) {
    throw ConfigError("/schema_version", "unsupported schema version");
  }

  NetworkConfig out;
  {
    const json& arr = jsonu::as_array(jsonu::require(doc, "", "vlans"),
                                      "/vlans");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "/vlans/" + std::to_string(i);
      const json& v = jsonu::as_object(arr[i], path);
      jsonu::reject_unknown_keys(v, path, {"id", "subnet"});
      VlanConfig vlan;
      vlan.id = parse_vlan_at(jsonu::require(v, path, "id"), path + "/id");
      const std::string subnet_path = path + "/subnet";
      auto subnet = Subnet::try_parse(
          jsonu::as_string(jsonu::require(v, path, "subnet"), subnet_path));
      if (!subnet) throw ConfigError(subnet_path, "not a subnet");
      vlan.subnet = *subnet;
      out.vlans.push_back(vlan);
    }
  }
  {
    const json& arr = jsonu::as_array(jsonu::require(doc, "", "hosts"),
                                      "/hosts");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "/hosts/" + std::to_string(i);
      const json& h = jsonu::as_object(arr[i], path);
      jsonu::reject_unknown_keys(h, path, {"name", "ip", "mac", "vlan"});
      HostConfig host;
      host.name = jsonu::as_string(jsonu::require(h, path, "name"),
                                   path + "/name");
      host.ip = parse_ip_at(jsonu::require(h, path, "ip"), path + "/ip");
      host.mac = parse_mac_at(jsonu::require(h, path, "mac"), path + "/mac");
      host.vlan = parse_vlan_at(jsonu::require(h, path, "vlan"),
                                path + "/vlan");
      out.hosts.push_back(host);
    }
  }
  {
    const std::string path = "/alg";
    const json& alg = jsonu::as_object(jsonu::require(doc, "", "alg"), path);
    jsonu::reject_unknown_keys(alg, path,
                               {"mac", "ip_by_vlan", "base_service_cost_ms",
                                "per_byte_cost_ms", "regex_step_cost_ms"});
    out.alg.mac = parse_mac_at(jsonu::require(alg, path, "mac"),
                               path + "/mac");
    const json& attach = jsonu::as_object(
        jsonu::require(alg, path, "ip_by_vlan"), path + "/ip_by_vlan");
    for (const auto& item : attach.items()) {
      const std::string entry_path = path + "/ip_by_vlan/" + item.key();
      std::int64_t vlan = 0;
      try {
        vlan = std::stoll(item.key());
      } catch (...) {
        throw ConfigError(entry_path, "key is not a vlan id");
      }
      if (vlan < 1 || vlan > 4094) {
        throw ConfigError(entry_path, "vlan id out of range 1..4094");
      }
      out.alg.ip_by_vlan[static_cast<VlanId>(vlan)] =
          parse_ip_at(item.value(), entry_path);
    }
    out.alg.base_service_cost =
        parse_cost_ms_at(jsonu::require(alg, path, "base_service_cost_ms"),
                         path + "/base_service_cost_ms");
    out.alg.per_byte_cost =
        parse_cost_ms_at(jsonu::require(alg, path, "per_byte_cost_ms"),
                         path + "/per_byte_cost_ms");
    out.alg.regex_step_cost =
        parse_cost_ms_at(jsonu::require(alg, path, "regex_step_cost_ms"),
                         path + "/regex_step_cost_ms");
  }
  if (auto it = doc.find("mtu"); it != doc.end()) {
    const std::int64_t mtu = jsonu::as_int(*it, "/mtu");
    if (mtu < 1 || mtu > 16'777'216) {
      throw ConfigError("/mtu", "must be in 1..2^24");
    }
    out.mtu = static_cast<std::size_t>(mtu);
  }

  out.validate();
  return out;
}

}  // namespace algsim
