#include "algsim/policy.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

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

std::shared_ptr<const Pattern> compile_pattern_at(const json& v,
                                                  const std::string& path) {
  const std::string text = jsonu::as_string(v, path);
  try {
    return std::make_shared<const Pattern>(Pattern::compile(text));
  } catch (const PatternSyntaxError& e) {
    throw ConfigError(path, std::string("bad pattern: ") + e.what());
  }
}

RegexEngine parse_engine_at(const json& v, const std::string& path) {
  const std::string name = jsonu::as_string(v, path);
  try {
    return regex_engine_from_name(name);
  } catch (const ConfigError& e) {
    throw ConfigError(path, e.what());
  }
}

IpProto parse_port_proto_at(const json& v, const std::string& path) {
  const std::string name = jsonu::as_string(v, path);
  if (name == "tcp") return IpProto::Tcp;
  if (name == "udp") return IpProto::Udp;
  throw ConfigError(path, "port rule proto must be 'tcp' or 'udp'");
}

FileKind parse_kind_at(const json& v, const std::string& path) {
  const auto kind = file_kind_from_name(jsonu::as_string(v, path));
  if (!kind || *kind == FileKind::Unknown) {
    throw ConfigError(path, "required_kind must be 'doc' or 'mpeg'");
  }
  return *kind;
}

std::string parse_verb_at(const json& v, const std::string& path) {
  std::string verb = jsonu::as_string(v, path);
  if (verb.empty()) throw ConfigError(path, "verb must not be empty");
  for (char& c : verb) {
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      throw ConfigError(path, "verb must contain only letters");
    }
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return verb;
}

void load_ftp_scan(const json& v, const std::string& path, PolicySet& out) {
  jsonu::as_object(v, path);
  const std::string mode =
      jsonu::as_string(jsonu::require(v, path, "mode"), path + "/mode");
  if (mode == "off") {
    jsonu::reject_unknown_keys(v, path, {"mode"});
    out.ftp_scan.mode = FtpScanMode::Off;
    return;
  }
  if (mode != "on") {
    throw ConfigError(path + "/mode", "must be 'off' or 'on'");
  }
  jsonu::reject_unknown_keys(v, path, {"mode", "pattern", "engine"});
  out.ftp_scan.mode = FtpScanMode::On;
  out.ftp_scan.pattern =
      compile_pattern_at(jsonu::require(v, path, "pattern"), path + "/pattern");
  out.ftp_scan.engine =
      parse_engine_at(jsonu::require(v, path, "engine"), path + "/engine");
}

void load_spoof_auth(const json& v, const std::string& path, PolicySet& out) {
  jsonu::as_object(v, path);
  const std::string mode =
      jsonu::as_string(jsonu::require(v, path, "mode"), path + "/mode");
  if (mode == "address_only") {
    jsonu::reject_unknown_keys(v, path, {"mode"});
    out.spoof_auth = SpoofAuthMode::AddressOnly;
    return;
  }
  if (mode != "token") {
    throw ConfigError(path + "/mode", "must be 'address_only' or 'token'");
  }
  jsonu::reject_unknown_keys(v, path, {"mode", "tokens"});
  out.spoof_auth = SpoofAuthMode::Token;
  const json& tokens = jsonu::as_object(jsonu::require(v, path, "tokens"),
                                        path + "/tokens");
  for (const auto& item : tokens.items()) {
    const std::string entry_path = path + "/tokens/" + item.key();
    auto ip = IpAddr::try_parse(item.key());
    if (!ip) throw ConfigError(entry_path, "key is not an IPv4 address");
    out.auth_tokens[*ip] = jsonu::as_string(item.value(), entry_path);
  }
}

}  // namespace

const ContentRoute* PolicySet::find_route(std::uint16_t ingress_port,
                                          const IpAddr& src_ip) const {
  for (const ContentRoute& route : content_routes) {
    if (route.ingress_port == ingress_port && route.allowed_src_ip == src_ip) {
      return &route;
    }
  }
  return nullptr;
}

bool PolicySet::is_route_ingress_port(std::uint16_t port) const {
  return std::any_of(
      content_routes.begin(), content_routes.end(),
      [port](const ContentRoute& r) { return r.ingress_port == port; });
}

PolicySet load_policy(std::string_view json_bytes) {
  const json doc = jsonu::parse_document(json_bytes, "policy document");
  jsonu::reject_unknown_keys(
      doc, "",
      {"schema_version", "isolation_default_deny", "ip_whitelist",
       "mac_whitelist", "static_arp", "allowed_protocols", "port_rules",
       "content_routes", "url_blocklist", "url_engine", "regex_budget",
       "author_whitelist", "ftp_blocked_verbs", "ftp_scan", "header_mode",
       "spoof_auth", "bandwidth", "performance"});

  PolicySet out;
  if (jsonu::as_int(jsonu::require(doc, "", "schema_version"),
                    "/schema_version") != 1) {
    throw ConfigError("/schema_version", "unsupported schema version");
  }
  out.isolation_default_deny =
      jsonu::as_bool(jsonu::require(doc, "", "isolation_default_deny"),
                     "/isolation_default_deny");

  {
    const json& arr = jsonu::as_array(jsonu::require(doc, "", "ip_whitelist"),
                                      "/ip_whitelist");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.ip_whitelist.insert(
          parse_ip_at(arr[i], "/ip_whitelist/" + std::to_string(i)));
    }
  }
  {
    const json& arr = jsonu::as_array(jsonu::require(doc, "", "mac_whitelist"),
                                      "/mac_whitelist");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.mac_whitelist.insert(
          parse_mac_at(arr[i], "/mac_whitelist/" + std::to_string(i)));
    }
  }
  {
    const json& obj = jsonu::as_object(jsonu::require(doc, "", "static_arp"),
                                       "/static_arp");
    for (const auto& item : obj.items()) {
      const std::string path = "/static_arp/" + item.key();
      auto ip = IpAddr::try_parse(item.key());
      if (!ip) throw ConfigError(path, "key is not an IPv4 address");
      out.static_arp[*ip] = parse_mac_at(item.value(), path);
    }
  }
  {
    const json& arr = jsonu::as_array(
        jsonu::require(doc, "", "allowed_protocols"), "/allowed_protocols");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "/allowed_protocols/" + std::to_string(i);
      const std::string name = jsonu::as_string(arr[i], path);
      if (name != "icmp" && name != "tcp" && name != "udp") {
        throw ConfigError(path, "protocol must be 'icmp', 'tcp', or 'udp'");
      }
      out.allowed_protocols.insert(name);
    }
  }
  {
    const json& arr = jsonu::as_array(jsonu::require(doc, "", "port_rules"),
                                      "/port_rules");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "/port_rules/" + std::to_string(i);
      const json& rule = jsonu::as_object(arr[i], path);
      jsonu::reject_unknown_keys(rule, path, {"proto", "dst_port", "action"});
      PortRule r;
      r.proto = parse_port_proto_at(jsonu::require(rule, path, "proto"),
                                    path + "/proto");
      r.dst_port = jsonu::as_port(jsonu::require(rule, path, "dst_port"),
                                  path + "/dst_port");
      const std::string action = jsonu::as_string(
          jsonu::require(rule, path, "action"), path + "/action");
      if (action == "allow") {
        r.action = PortAction::Allow;
      } else if (action == "deny") {
        r.action = PortAction::Deny;
      } else {
        throw ConfigError(path + "/action", "must be 'allow' or 'deny'");
      }
      out.port_rules.push_back(r);
    }
  }
  {
    const json& arr = jsonu::as_array(
        jsonu::require(doc, "", "content_routes"), "/content_routes");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "/content_routes/" + std::to_string(i);
      const json& route = jsonu::as_object(arr[i], path);
      jsonu::reject_unknown_keys(route, path,
                                 {"ingress_port", "allowed_src_ip",
                                  "required_kind", "dest_ip", "dest_port"});
      ContentRoute r;
      r.ingress_port = jsonu::as_port(
          jsonu::require(route, path, "ingress_port"), path + "/ingress_port");
      r.allowed_src_ip =
          parse_ip_at(jsonu::require(route, path, "allowed_src_ip"),
                      path + "/allowed_src_ip");
      r.required_kind =
          parse_kind_at(jsonu::require(route, path, "required_kind"),
                        path + "/required_kind");
      r.dest_ip = parse_ip_at(jsonu::require(route, path, "dest_ip"),
                              path + "/dest_ip");
      r.dest_port = jsonu::as_port(jsonu::require(route, path, "dest_port"),
                                   path + "/dest_port");
      for (const ContentRoute& other : out.content_routes) {
        if (other.ingress_port == r.ingress_port) {
          throw ConfigError(path + "/ingress_port",
                            "ingress port already used by another route");
        }
      }
      out.content_routes.push_back(r);
    }
  }
  {
    const json& arr = jsonu::as_array(jsonu::require(doc, "", "url_blocklist"),
                                      "/url_blocklist");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.url_blocklist.push_back(
          compile_pattern_at(arr[i], "/url_blocklist/" + std::to_string(i)));
    }
  }
  if (auto it = doc.find("url_engine"); it != doc.end()) {
    out.url_engine = parse_engine_at(*it, "/url_engine");
  }
  if (auto it = doc.find("regex_budget"); it != doc.end()) {
    out.regex_budget = jsonu::as_int(*it, "/regex_budget");
    if (out.regex_budget < 1) {
      throw ConfigError("/regex_budget", "must be at least 1");
    }
  }
  {
    const json& arr = jsonu::as_array(
        jsonu::require(doc, "", "author_whitelist"), "/author_whitelist");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.author_whitelist.insert(
          jsonu::as_string(arr[i], "/author_whitelist/" + std::to_string(i)));
    }
  }
  {
    const json& arr = jsonu::as_array(
        jsonu::require(doc, "", "ftp_blocked_verbs"), "/ftp_blocked_verbs");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.ftp_blocked_verbs.insert(
          parse_verb_at(arr[i], "/ftp_blocked_verbs/" + std::to_string(i)));
    }
  }
  load_ftp_scan(jsonu::require(doc, "", "ftp_scan"), "/ftp_scan", out);
  {
    const std::string mode = jsonu::as_string(
        jsonu::require(doc, "", "header_mode"), "/header_mode");
    if (mode == "strict") {
      out.header_mode = HeaderMode::Strict;
    } else if (mode == "last_wins") {
      out.header_mode = HeaderMode::LastWins;
    } else {
      throw ConfigError("/header_mode", "must be 'strict' or 'last_wins'");
    }
  }
  load_spoof_auth(jsonu::require(doc, "", "spoof_auth"), "/spoof_auth", out);
  if (auto it = doc.find("bandwidth"); it != doc.end() && !it->is_null()) {
    const std::string path = "/bandwidth";
    const json& bw = jsonu::as_object(*it, path);
    jsonu::reject_unknown_keys(bw, path, {"rate_per_min", "burst"});
    BandwidthConfig cfg;
    cfg.rate_per_min = jsonu::as_int(jsonu::require(bw, path, "rate_per_min"),
                                     path + "/rate_per_min");
    cfg.burst = jsonu::as_int(jsonu::require(bw, path, "burst"),
                              path + "/burst");
    if (cfg.rate_per_min < 1 || cfg.rate_per_min > 1'000'000'000'000) {
      throw ConfigError(path + "/rate_per_min", "must be in 1..10^12");
    }
    if (cfg.burst < 1 || cfg.burst > 1'000'000'000) {
      throw ConfigError(path + "/burst", "must be in 1..10^9");
    }
    out.bandwidth = cfg;
  }
  {
    const std::string path = "/performance";
    const json& perf =
        jsonu::as_object(jsonu::require(doc, "", "performance"), path);
    jsonu::reject_unknown_keys(perf, path,
                               {"capacity_rpm", "max_acceptable_latency_ms"});
    out.performance.capacity_rpm = jsonu::as_int(
        jsonu::require(perf, path, "capacity_rpm"), path + "/capacity_rpm");
    out.performance.max_acceptable_latency_ms =
        jsonu::as_int(jsonu::require(perf, path, "max_acceptable_latency_ms"),
                      path + "/max_acceptable_latency_ms");
    if (out.performance.capacity_rpm < 1) {
      throw ConfigError(path + "/capacity_rpm", "must be at least 1");
    }
    if (out.performance.max_acceptable_latency_ms < 0) {
      throw ConfigError(path + "/max_acceptable_latency_ms",
                        "must be non-negative");
    }
  }
  return out;
}

TokenBucket::TokenBucket(std::int64_t rate_per_min, std::int64_t burst)
    : rate_per_min_(rate_per_min),
      burst_(burst),
      tokens_(burst),
      acc_(0),
      last_(0) {}

bool TokenBucket::admit(VirtualTime now) {
  if (now > last_) {
    const std::int64_t delta = now - last_;
    if (rate_per_min_ > 0 &&
        delta > (std::numeric_limits<std::int64_t>::max() - acc_) /
                    rate_per_min_) {
      tokens_ = burst_;
      acc_ = 0;
    } else {
      acc_ += delta * rate_per_min_;
      const std::int64_t whole = acc_ / kNsPerMin;
      if (whole > 0) {
        tokens_ = std::min(burst_, tokens_ + whole);
        acc_ -= whole * kNsPerMin;
      }
    }
    last_ = now;
  }
  if (tokens_ > 0) {
    --tokens_;
    return true;
  }
  return false;
}

Decision Decision::allow() {
  Decision d;
  d.kind = DecisionKind::Allow;
  return d;
}

Decision Decision::deny(std::string reason, std::string cwe) {
  Decision d;
  d.kind = DecisionKind::Deny;
  d.reason = std::move(reason);
  d.cwe = std::move(cwe);
  return d;
}

Decision Decision::inspect(InspectorKind inspector) {
  Decision d;
  d.kind = DecisionKind::ForwardToInspector;
  d.inspector = inspector;
  return d;
}

Decision decide_l3(const PolicySet& policy, const Frame& frame,
                   VirtualTime now, TokenBucket* bucket,
                   const std::set<IpAddr>& alg_ips) {
  if (frame.kind != FrameKind::Ipv4 || !frame.ip.has_value()) {
    return Decision::deny("not-ipv4", "");
  }
  const IpHeader& ip = *frame.ip;
  if (policy.isolation_default_deny) {
    if (!policy.ip_whitelist.count(ip.src)) {
      return Decision::deny("ip-not-whitelisted", "CWE-290");
    }
    if (!policy.mac_whitelist.count(frame.src_mac)) {
      return Decision::deny("mac-not-whitelisted", "CWE-290");
    }
  }
  if (policy.spoof_auth == SpoofAuthMode::Token) {
    auto it = policy.auth_tokens.find(ip.src);
    if (it == policy.auth_tokens.end() || it->second != frame.auth_token) {
      return Decision::deny("auth-token-mismatch", "CWE-290");
    }
  }
  if (!policy.allowed_protocols.count(std::string(ip_proto_name(ip.proto)))) {
    return Decision::deny("protocol-not-allowed", "CWE-20");
  }
  if (frame.l4.has_value()) {
    for (const PortRule& rule : policy.port_rules) {
      if (rule.proto == ip.proto && rule.dst_port == frame.l4->dst_port) {
        if (rule.action == PortAction::Deny) {
          return Decision::deny("port-blocked", "CWE-20");
        }
        break;
      }
    }
  }
  if (policy.bandwidth.has_value() && bucket != nullptr) {
    if (!bucket->admit(now)) {
      return Decision::deny("rate-exceeded", "CWE-400");
    }
  }
  if (ip.proto == IpProto::Tcp && frame.l4.has_value()) {
    if (frame.l4->dst_port == 21) {
      return Decision::inspect(InspectorKind::Ftp);
    }
    if (alg_ips.count(ip.dst) &&
        policy.is_route_ingress_port(frame.l4->dst_port)) {
      return Decision::inspect(InspectorKind::Http);
    }
  }
  return Decision::allow();
}

ArpOutcome handle_arp(const PolicySet& policy,
                      const std::map<IpAddr, MacAddr>& table,
                      const ArpMessage& msg, const std::set<IpAddr>& alg_ips,
                      const MacAddr& alg_mac) {
  ArpOutcome out;
  out.table = table;
  auto bound = policy.static_arp.find(msg.sender_ip);
  if (bound != policy.static_arp.end() && bound->second != msg.sender_mac) {
    out.event = ArpEvent::PoisonRejected;
    return out;
  }
  if (msg.op == ArpOp::Request && alg_ips.count(msg.target_ip)) {
    out.event = ArpEvent::Replied;
    out.reply = ArpMessage{ArpOp::Reply, msg.target_ip, alg_mac,
                           msg.sender_ip, msg.sender_mac};
    return out;
  }
  out.event = ArpEvent::Ignored;
  return out;
}

}  // namespace algsim
