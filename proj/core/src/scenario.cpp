#include "algsim/scenario.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "algsim/errors.hpp"
#include "algsim/file_kind.hpp"
#include "algsim/http_message.hpp"
#include "algsim/netsim.hpp"
#include "algsim/rng.hpp"

namespace algsim {
namespace {

// A URL filter that needs more steps than this to answer one request is
// treated as successfully denial-of-serviced.
constexpr std::int64_t kRedosStepThreshold = std::int64_t{1} << 20;

std::vector<const HostConfig*> hosts_by_ip(const NetworkConfig& net) {
  std::vector<const HostConfig*> out;
  out.reserve(net.hosts.size());
  for (const HostConfig& host : net.hosts) {
    out.push_back(&host);
  }
  std::sort(out.begin(), out.end(),
            [](const HostConfig* a, const HostConfig* b) {
              return a->ip < b->ip;
            });
  return out;
}

bool is_authorized(const PolicySet& policy, const HostConfig& host) {
  return policy.ip_whitelist.count(host.ip) != 0 &&
         policy.mac_whitelist.count(host.mac) != 0;
}

std::vector<const HostConfig*> authorized_hosts(const NetworkConfig& net,
                                                const PolicySet& policy) {
  std::vector<const HostConfig*> out;
  for (const HostConfig* host : hosts_by_ip(net)) {
    if (is_authorized(policy, *host)) {
      out.push_back(host);
    }
  }
  return out;
}

const HostConfig* first_unauthorized(const NetworkConfig& net,
                                     const PolicySet& policy) {
  for (const HostConfig* host : hosts_by_ip(net)) {
    if (!is_authorized(policy, *host)) {
      return host;
    }
  }
  return nullptr;
}

void stamp_token(const PolicySet& policy, const HostConfig& host,
                 Frame& frame) {
  auto it = policy.auth_tokens.find(host.ip);
  if (it != policy.auth_tokens.end()) {
    frame.auth_token = it->second;
  }
}

Frame tcp_via_gateway(const NetworkConfig& net, const PolicySet& policy,
                      const HostConfig& src, const IpAddr& dst_ip,
                      std::uint16_t dst_port, std::string payload) {
  Frame frame;
  frame.src_mac = src.mac;
  frame.dst_mac = net.alg.mac;
  frame.kind = FrameKind::Ipv4;
  frame.ip = IpHeader{src.ip, dst_ip, IpProto::Tcp};
  frame.l4 = L4Header{49152, dst_port};
  frame.payload = std::move(payload);
  stamp_token(policy, src, frame);
  return frame;
}

Frame http_via_gateway(const NetworkConfig& net, const PolicySet& policy,
                       const HostConfig& src, std::uint16_t ingress_port,
                       const HttpMessage& request) {
  IpAddr gateway_ip = net.alg.ip_by_vlan.at(src.vlan);
  return tcp_via_gateway(net, policy, src, gateway_ip, ingress_port,
                         serialize_http(request));
}

struct WireResponse {
  int status = 0;
  std::string reason;

  bool operator<(const WireResponse& other) const {
    if (status != other.status) return status < other.status;
    return reason < other.reason;
  }
  bool operator==(const WireResponse& other) const = default;
};

std::string response_text(const WireResponse& resp) {
  std::string out = std::to_string(resp.status);
  if (!resp.reason.empty()) {
    out += " " + resp.reason;
  }
  return out;
}

std::vector<WireResponse> http_responses(const Network& network,
                                         const std::string& host) {
  std::vector<WireResponse> out;
  for (const auto& [at, frame] : network.inbox(host)) {
    if (frame.kind != FrameKind::Ipv4 || !frame.ip ||
        frame.ip->proto != IpProto::Tcp) {
      continue;
    }
    try {
      HttpMessage resp = parse_http_response(frame.payload);
      WireResponse seen;
      seen.status = resp.status;
      if (auto reason = resp.last_header("X-Reject-Reason")) {
        seen.reason = *reason;
      }
      out.push_back(std::move(seen));
    } catch (const HttpParseError&) {
    }
  }
  return out;
}

bool inbox_has_payload(const Network& network, const std::string& host,
                       std::string_view payload) {
  for (const auto& [at, frame] : network.inbox(host)) {
    if (frame.payload == payload) {
      return true;
    }
  }
  return false;
}

bool any_inbox_has_marker(const Network& network, std::string_view marker) {
  for (const HostConfig& host : network.config().hosts) {
    for (const auto& [at, frame] : network.inbox(host.name)) {
      if (frame.payload.find(marker) != std::string::npos) {
        return true;
      }
    }
  }
  return false;
}

ScenarioResult base_result(const ScenarioSpec& spec) {
  ScenarioResult res;
  res.id = spec.id;
  res.cwe = spec.cwe;
  return res;
}

[[noreturn]] void missing_actor(const ScenarioSpec& spec,
                                const std::string& what) {
  throw std::invalid_argument("scenario " + spec.id +
                              " needs " + what);
}

// Policy-side mirror of what an echo exchange needs: the request and the
// reply each cross the gateway once, so both endpoints must pass the L3
// checks. Kept independent of decide_l3 so the simulation and the oracle
// can disagree.
bool expected_echo(const PolicySet& policy, const HostConfig& a,
                   const HostConfig& b) {
  if (a.vlan == b.vlan) {
    return true;
  }
  if (!policy.allowed_protocols.count("icmp")) {
    return false;
  }
  auto passes = [&](const HostConfig& h) {
    if (policy.isolation_default_deny && !is_authorized(policy, h)) {
      return false;
    }
    if (policy.spoof_auth == SpoofAuthMode::Token &&
        policy.auth_tokens.count(h.ip) == 0) {
      return false;
    }
    return true;
  };
  return passes(a) && passes(b);
}

ScenarioResult run_s1(const ScenarioSpec& spec, const NetworkConfig& net,
                      const PolicySet& policy) {
  ScenarioResult res = base_result(spec);
  Network network(net, policy);
  std::vector<const HostConfig*> all = hosts_by_ip(net);
  std::int64_t reachable = 0;
  std::int64_t blocked = 0;
  std::vector<std::string> mismatches;
  for (const HostConfig* a : all) {
    for (const HostConfig* b : all) {
      if (a == b) continue;
      Reachability r = network.icmp_probe(a->name, b->ip);
      bool expected = expected_echo(policy, *a, *b);
      (r.reply ? reachable : blocked) += 1;
      if (r.reply != expected) {
        std::string got = r.reply ? "replied" : "dropped(" + r.reason + ")";
        mismatches.push_back(a->name + "->" + b->name + " " + got +
                             " but the policy says " +
                             (expected ? "reachable" : "blocked"));
      }
    }
  }
  bool bypass = has_inter_vlan_bypass(network);
  std::int64_t pairs = reachable + blocked;
  res.metrics["pairs"] = pairs;
  res.metrics["reachable"] = reachable;
  res.metrics["blocked"] = blocked;
  res.metrics["mismatches"] = static_cast<std::int64_t>(mismatches.size());
  res.evidence.push_back(std::to_string(pairs) + " ordered host pairs: " +
                         std::to_string(reachable) + " reachable, " +
                         std::to_string(blocked) + " blocked");
  res.evidence.push_back(bypass
                             ? "a frame crossed VLANs without gateway service"
                             : "every inter-VLAN delivery passed the gateway");
  for (std::size_t i = 0; i < mismatches.size() && i < 10; ++i) {
    res.evidence.push_back(mismatches[i]);
  }
  res.verdict = (mismatches.empty() && !bypass) ? Verdict::Enforced
                                                : Verdict::NotEnforced;
  res.trace = network.trace();
  res.virtual_duration = network.now();
  return res;
}

ScenarioResult run_spoof(const ScenarioSpec& spec, const NetworkConfig& net,
                         const PolicySet& policy, bool mac_flavor) {
  ScenarioResult res = base_result(spec);
  const HostConfig* attacker = first_unauthorized(net, policy);
  if (attacker == nullptr) missing_actor(spec, "an unauthorized host");
  std::vector<const HostConfig*> victims;
  const HostConfig* target = nullptr;
  for (const HostConfig* host : authorized_hosts(net, policy)) {
    if (host->vlan == attacker->vlan) {
      victims.push_back(host);
    } else if (target == nullptr) {
      target = host;
    }
  }
  if (victims.empty()) {
    missing_actor(spec, "an authorized host in the attacker's VLAN");
  }
  if (target == nullptr) {
    missing_actor(spec, "an authorized host in another VLAN");
  }
  const HostConfig* victim = mac_flavor ? victims.back() : victims.front();
  std::string payload = mac_flavor ? "spoofed-mac-probe" : "spoofed-ip-probe";

  Network network(net, policy);
  Frame frame;
  frame.src_mac = victim->mac;
  frame.dst_mac = net.alg.mac;
  frame.kind = FrameKind::Ipv4;
  frame.ip = IpHeader{victim->ip, target->ip, IpProto::Tcp};
  frame.l4 = L4Header{40000, 40000};
  frame.payload = payload;
  std::uint64_t id = network.inject_frame(attacker->name, frame, 0);
  network.run_until_idle();

  bool delivered = inbox_has_payload(network, target->name, payload);
  res.metrics["delivered"] = delivered ? 1 : 0;
  if (delivered) {
    res.verdict = Verdict::NotEnforced;
    res.evidence.push_back("frame claiming " + victim->ip.to_string() + "/" +
                           victim->mac.to_string() + " sent from " +
                           attacker->name + " was delivered to " +
                           target->name);
  } else {
    const FrameRecord* rec = network.record(id);
    res.verdict = Verdict::Enforced;
    res.evidence.push_back("spoofed frame dropped at " + rec->end_node +
                           ": " + rec->drop_reason);
    if (!rec->drop_cwe.empty()) {
      res.evidence.push_back("tagged " + rec->drop_cwe);
    }
  }
  res.trace = network.trace();
  res.virtual_duration = network.now();
  return res;
}

ScenarioResult run_s4(const ScenarioSpec& spec, const NetworkConfig& net,
                      const PolicySet& policy) {
  ScenarioResult res = base_result(spec);
  const HostConfig* attacker = first_unauthorized(net, policy);
  if (attacker == nullptr) missing_actor(spec, "an unauthorized host");
  const HostConfig* victim = nullptr;
  const HostConfig* prober = nullptr;
  for (const HostConfig* host : authorized_hosts(net, policy)) {
    if (host->vlan == attacker->vlan) {
      if (victim == nullptr) victim = host;
    } else if (prober == nullptr) {
      prober = host;
    }
  }
  if (victim == nullptr) {
    missing_actor(spec, "an authorized host in the attacker's VLAN");
  }
  if (prober == nullptr) {
    missing_actor(spec, "an authorized host in another VLAN");
  }

  Network network(net, policy);
  ArpMessage poison;
  poison.op = ArpOp::Request;
  poison.sender_ip = victim->ip;
  poison.sender_mac = attacker->mac;
  poison.target_ip = net.alg.ip_by_vlan.at(attacker->vlan);
  Frame frame;
  frame.src_mac = attacker->mac;
  frame.dst_mac = MacAddr::broadcast();
  frame.kind = FrameKind::Arp;
  frame.payload = serialize_arp(poison);
  std::uint64_t id = network.inject_frame(attacker->name, frame, 0);
  network.run_until_idle();

  const FrameRecord* rec = network.record(id);
  bool rejected = network.poison_rejections() == 1 &&
                  rec->drop_reason == "arp-poison-rejected";
  Reachability probe = network.icmp_probe(prober->name, victim->ip);

  res.metrics["poison_rejections"] = network.poison_rejections();
  res.metrics["binding_intact"] = probe.reply ? 1 : 0;
  res.evidence.push_back(
      rejected ? "forged binding for " + victim->ip.to_string() +
                     " rejected, static table kept"
               : "forged binding was not rejected");
  res.evidence.push_back(probe.reply
                             ? "follow-up echo still reached the real host"
                             : "follow-up echo failed: " + probe.reason);
  res.verdict =
      (rejected && probe.reply) ? Verdict::Enforced : Verdict::NotEnforced;
  res.trace = network.trace();
  res.virtual_duration = network.now();
  return res;
}

struct FtpActors {
  const HostConfig* client = nullptr;
  const HostConfig* server = nullptr;
};

FtpActors ftp_actors(const ScenarioSpec& spec, const NetworkConfig& net,
                     const PolicySet& policy) {
  std::set<IpAddr> route_sources;
  for (const ContentRoute& route : policy.content_routes) {
    route_sources.insert(route.allowed_src_ip);
  }
  FtpActors actors;
  for (const HostConfig* host : authorized_hosts(net, policy)) {
    if (route_sources.count(host->ip)) continue;
    if (actors.client == nullptr) {
      actors.client = host;
    } else if (host->vlan != actors.client->vlan) {
      actors.server = host;
    }
  }
  if (actors.client == nullptr || actors.server == nullptr) {
    missing_actor(spec, "an FTP client and a cross-VLAN FTP server");
  }
  return actors;
}

ScenarioResult run_s5(const ScenarioSpec& spec, const NetworkConfig& net,
                      const PolicySet& policy) {
  ScenarioResult res = base_result(spec);
  FtpActors actors = ftp_actors(spec, net, policy);

  Network network(net, policy);
  std::uint64_t mkd = network.inject_frame(
      actors.client->name,
      tcp_via_gateway(net, policy, *actors.client, actors.server->ip, 21,
                      "MKD evil\r\n"),
      0);
  network.inject_frame(
      actors.client->name,
      tcp_via_gateway(net, policy, *actors.client, actors.server->ip, 21,
                      "LIST\r\n"),
      100 * kNsPerMs);
  network.run_until_idle();

  bool blocked = network.record(mkd)->drop_reason == "ftp-verb-blocked";
  bool refused =
      inbox_has_payload(network, actors.client->name, "550 MKD denied\r\n");
  bool mkd_leaked =
      inbox_has_payload(network, actors.server->name, "MKD evil\r\n");
  bool list_through =
      inbox_has_payload(network, actors.server->name, "LIST\r\n") &&
      inbox_has_payload(network, actors.client->name, "200 LIST ok\r\n");

  res.metrics["mkd_blocked"] = blocked ? 1 : 0;
  res.metrics["list_delivered"] = list_through ? 1 : 0;
  res.evidence.push_back(blocked && refused && !mkd_leaked
                             ? "MKD refused with 550, nothing reached the "
                               "server"
                             : "MKD was not blocked");
  res.evidence.push_back(list_through
                             ? "LIST passed through and was acknowledged"
                             : "LIST did not pass");
  res.verdict = (blocked && refused && !mkd_leaked && list_through)
                    ? Verdict::Enforced
                    : Verdict::NotEnforced;
  res.trace = network.trace();
  res.virtual_duration = network.now();
  return res;
}

ScenarioResult run_s6(const ScenarioSpec& spec, const NetworkConfig& net,
                      const PolicySet& policy) {
  ScenarioResult res = base_result(spec);
  FtpActors actors = ftp_actors(spec, net, policy);

  std::string payload = "CP payload.bin\r\nsegment-1 EVIL segment-2";
  Network network(net, policy);
  std::uint64_t id = network.inject_frame(
      actors.client->name,
      tcp_via_gateway(net, policy, *actors.client, actors.server->ip, 21,
                      payload),
      0);
  network.run_until_idle();

  const FrameRecord* rec = network.record(id);
  bool delivered = inbox_has_payload(network, actors.server->name, payload);
  res.metrics["delivered"] = delivered ? 1 : 0;
  res.metrics["scan_steps"] = rec->regex_steps;
  for (const std::string& note : rec->notes) {
    res.evidence.push_back(note);
  }
  if (delivered) {
    res.verdict = Verdict::NotEnforced;
    res.evidence.push_back("malicious transfer reached " +
                           actors.server->name);
  } else {
    bool refused = inbox_has_payload(network, actors.client->name,
                                     "550 malicious payload\r\n");
    res.verdict = (rec->drop_reason == "ftp-malicious-data" && refused)
                      ? Verdict::Enforced
                      : Verdict::NotEnforced;
    res.evidence.push_back("transfer dropped at the gateway: " +
                           rec->drop_reason);
  }
  res.trace = network.trace();
  res.virtual_duration = network.now();
  return res;
}

struct UploadCase {
  std::string label;
  std::string content_type;
  std::string body;
  std::uint16_t port = 0;
  bool expect_accept = false;
  WireResponse expected;
};

const ContentRoute* route_of_kind(const PolicySet& policy, FileKind kind) {
  for (const ContentRoute& route : policy.content_routes) {
    if (route.required_kind == kind) {
      return &route;
    }
  }
  return nullptr;
}

ScenarioResult run_upload_cases(const ScenarioSpec& spec,
                                const NetworkConfig& net,
                                const PolicySet& policy,
                                const ContentRoute& route,
                                const std::vector<UploadCase>& cases) {
  ScenarioResult res = base_result(spec);
  const HostConfig* client = net.host_by_ip(route.allowed_src_ip);
  const HostConfig* server = net.host_by_ip(route.dest_ip);
  if (client == nullptr || server == nullptr) {
    missing_actor(spec, "hosts for the content route under test");
  }

  Network network(net, policy);
  VirtualTime at = 0;
  for (const UploadCase& item : cases) {
    HttpMessage req;
    req.kind = HttpKind::Request;
    req.method = "POST";
    req.target = "/upload";
    req.add_header("Host", "alg");
    req.add_header("Content-Type", item.content_type);
    req.add_header("Content-Length", std::to_string(item.body.size()));
    req.body = item.body;
    network.inject_frame(client->name,
                         http_via_gateway(net, policy, *client, item.port,
                                          req),
                         at);
    at += kNsPerSec;
  }
  network.run_until_idle();

  std::vector<WireResponse> actual = http_responses(network, client->name);
  std::vector<WireResponse> expected;
  bool deliveries_ok = true;
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  for (const UploadCase& item : cases) {
    if (item.expect_accept) {
      ++accepted;
      expected.push_back(WireResponse{200, ""});
      bool at_server = false;
      for (const auto& [t, f] : network.inbox(server->name)) {
        if (f.payload.find(item.label) != std::string::npos) {
          at_server = true;
          break;
        }
      }
      if (at_server) {
        res.evidence.push_back(item.label + " delivered to " + server->name);
      } else {
        deliveries_ok = false;
        res.evidence.push_back(item.label + " was not delivered to " +
                               server->name);
      }
    } else {
      ++rejected;
      expected.push_back(item.expected);
      if (any_inbox_has_marker(network, item.label)) {
        deliveries_ok = false;
        res.evidence.push_back(item.label +
                               " leaked past the gateway despite " +
                               response_text(item.expected));
      } else {
        res.evidence.push_back(item.label + " rejected with " +
                               response_text(item.expected));
      }
    }
  }
  std::sort(actual.begin(), actual.end());
  std::sort(expected.begin(), expected.end());
  bool responses_ok = actual == expected;
  if (!responses_ok) {
    std::string got = "responses seen:";
    for (const WireResponse& r : actual) {
      got += " [" + response_text(r) + "]";
    }
    res.evidence.push_back(got);
  }
  res.metrics["accepted"] = accepted;
  res.metrics["rejected"] = rejected;
  res.metrics["responses"] = static_cast<std::int64_t>(actual.size());
  res.verdict = (deliveries_ok && responses_ok) ? Verdict::Enforced
                                                : Verdict::NotEnforced;
  res.trace = network.trace();
  res.virtual_duration = network.now();
  return res;
}

std::string whitelisted_author(const ScenarioSpec& spec,
                               const PolicySet& policy) {
  if (policy.author_whitelist.empty()) {
    missing_actor(spec, "a non-empty author whitelist");
  }
  return *policy.author_whitelist.begin();
}

ScenarioResult run_route_matrix(const ScenarioSpec& spec,
                                const NetworkConfig& net,
                                const PolicySet& policy, FileKind kind) {
  const ContentRoute* route = route_of_kind(policy, kind);
  if (route == nullptr) {
    missing_actor(spec, std::string("a content route for ") +
                            std::string(file_kind_name(kind)));
  }
  const ContentRoute* other = nullptr;
  for (const ContentRoute& candidate : policy.content_routes) {
    if (candidate.required_kind != kind) {
      other = &candidate;
      break;
    }
  }

  std::string ct{canonical_content_type(kind)};
  auto good_body = [&](const std::string& marker) {
    return kind == FileKind::Doc
               ? make_doc_body(whitelisted_author(spec, policy), marker)
               : make_mpeg_body(marker);
  };
  auto wrong_body = [&](const std::string& marker) {
    return kind == FileKind::Doc ? make_mpeg_body(marker)
                                 : make_doc_body("nobody", marker);
  };

  std::vector<UploadCase> cases;
  cases.push_back({spec.id + "-case-1", ct, good_body(spec.id + "-case-1"),
                   route->ingress_port, true, {}});
  cases.push_back({spec.id + "-case-2", ct, wrong_body(spec.id + "-case-2"),
                   route->ingress_port, false,
                   WireResponse{415, "file-kind-mismatch"}});
  cases.push_back({spec.id + "-case-3", "text/plain",
                   good_body(spec.id + "-case-3"), route->ingress_port, false,
                   WireResponse{415, "content-type-mismatch"}});
  if (other != nullptr) {
    cases.push_back({spec.id + "-case-4", ct, good_body(spec.id + "-case-4"),
                     other->ingress_port, false,
                     WireResponse{403, "no-route-for-port-source"}});
  }
  cases.push_back({spec.id + "-case-5", ct,
                   "garbage " + spec.id + "-case-5 bytes",
                   route->ingress_port, false,
                   WireResponse{415, "file-kind-mismatch"}});

  return run_upload_cases(spec, net, policy, *route, cases);
}

ScenarioResult run_s9(const ScenarioSpec& spec, const NetworkConfig& net,
                      const PolicySet& policy) {
  const ContentRoute* route = route_of_kind(policy, FileKind::Doc);
  if (route == nullptr) {
    missing_actor(spec, "a content route for doc");
  }
  std::string ct{canonical_content_type(FileKind::Doc)};

  SplitMix64 rng(spec.seed);
  auto random_author = [&rng]() {
    static const char kHex[] = "0123456789abcdef";
    std::string out = "intruder-";
    for (int i = 0; i < 12; ++i) {
      out += kHex[rng.below(16)];
    }
    return out;
  };

  std::vector<UploadCase> cases;
  std::vector<std::string> authors;
  for (int i = 1; i <= 3; ++i) {
    std::string author = random_author();
    authors.push_back(author);
    std::string label = spec.id + "-case-" + std::to_string(i);
    cases.push_back({label, ct, make_doc_body(author, label),
                     route->ingress_port, false,
                     WireResponse{403, "author-not-whitelisted"}});
  }
  std::string ok_author = whitelisted_author(spec, policy);
  cases.push_back({spec.id + "-case-ok", ct,
                   make_doc_body(ok_author, spec.id + "-case-ok"),
                   route->ingress_port, true, {}});

  ScenarioResult res = run_upload_cases(spec, net, policy, *route, cases);
  std::string tried = "authors tried:";
  for (const std::string& author : authors) {
    tried += " " + author;
  }
  res.evidence.push_back(tried + "; whitelisted: " + ok_author);
  return res;
}

ScenarioResult run_s10(const ScenarioSpec& spec, const NetworkConfig& net,
                       const PolicySet& policy) {
  ScenarioResult res = base_result(spec);
  const ContentRoute* route = route_of_kind(policy, FileKind::Doc);
  if (route == nullptr) {
    missing_actor(spec, "a content route for doc");
  }
  const HostConfig* client = net.host_by_ip(route->allowed_src_ip);
  if (client == nullptr) {
    missing_actor(spec, "the route's client host");
  }

  HttpMessage req;
  req.kind = HttpKind::Request;
  req.method = "POST";
  req.target = "/upload";
  req.add_header("Host", "alg");
  req.add_header("Content-Type", "application/doc");
  req.add_header("Content-Length", "4");
  req.add_header("Content-Length", "11");
  req.body = "hello worldGET /smug HTTP/1.1\r\nHost: a\r\n\r\n";

  Network network(net, policy);
  std::uint64_t id = network.inject_frame(
      client->name,
      http_via_gateway(net, policy, *client, route->ingress_port, req), 0);
  network.run_until_idle();

  std::vector<WireResponse> responses =
      http_responses(network, client->name);
  const FrameRecord* rec = network.record(id);
  for (const std::string& note : rec->notes) {
    res.evidence.push_back(note);
  }
  res.metrics["responses"] = static_cast<std::int64_t>(responses.size());
  bool strict_refusal = responses.size() == 1 && responses[0].status == 400;
  if (strict_refusal) {
    res.verdict = Verdict::Enforced;
    res.evidence.push_back(
        "single 400 refusal (" + responses[0].reason +
        "); the hidden request was never interpreted");
  } else {
    res.verdict = Verdict::NotEnforced;
    std::string got = std::to_string(responses.size()) +
                      " separate responses:";
    for (const WireResponse& r : responses) {
      got += " [" + response_text(r) + "]";
    }
    res.evidence.push_back(got);
    res.evidence.push_back(
        "the request hidden after the declared body was handled as its own "
        "request");
  }
  res.trace = network.trace();
  res.virtual_duration = network.now();
  return res;
}

ScenarioResult run_s11(const ScenarioSpec& spec, const NetworkConfig& net,
                       const PolicySet& policy) {
  ScenarioResult res = base_result(spec);
  if (policy.content_routes.empty()) {
    missing_actor(spec, "a content route to aim the request at");
  }
  const ContentRoute& route = policy.content_routes.front();
  const HostConfig* client = net.host_by_ip(route.allowed_src_ip);
  if (client == nullptr) {
    missing_actor(spec, "the route's client host");
  }

  HttpMessage req;
  req.kind = HttpKind::Request;
  req.method = "GET";
  req.target = "/" + std::string(20, 'a');
  req.add_header("Host", "alg");
  req.add_header("Content-Length", "0");

  Network network(net, policy);
  std::uint64_t id = network.inject_frame(
      client->name,
      http_via_gateway(net, policy, *client, route.ingress_port, req), 0);
  network.run_until_idle();

  const FrameRecord* rec = network.record(id);
  VirtualTime service = network.latency_of(id);
  res.metrics["url_steps"] = rec->regex_steps;
  res.metrics["step_threshold"] = kRedosStepThreshold;
  res.metrics["service_ns"] = service;
  res.evidence.push_back(
      "URL filter ran " + std::to_string(rec->regex_steps) +
      " regex steps on a 21-byte target with the " +
      std::string(regex_engine_name(policy.url_engine)) + " engine");
  res.evidence.push_back("gateway was busy " + vt_ms_string(service) +
                         "ms with this one request");
  res.verdict = rec->regex_steps > kRedosStepThreshold
                    ? Verdict::NotEnforced
                    : Verdict::Enforced;
  res.trace = network.trace();
  res.virtual_duration = network.now();
  return res;
}

ScenarioResult run_s12(const ScenarioSpec& spec, const NetworkConfig& net,
                       const PolicySet& policy) {
  ScenarioResult res = base_result(spec);
  std::int64_t capacity = policy.performance.capacity_rpm;
  std::vector<std::int64_t> schedule;
  for (std::int64_t share = 1; share <= 4; ++share) {
    std::int64_t rate = capacity * share / 4;
    if (rate > 0 && (schedule.empty() || rate > schedule.back())) {
      schedule.push_back(rate);
    }
  }
  StressReport report = stress(net, policy, schedule);
  for (const StressPoint& point : report.points) {
    std::int64_t mean_ns =
        point.completed == 0 ? 0 : point.sum_latency_ns / point.completed;
    res.evidence.push_back(
        "offered " + std::to_string(point.rate_per_min) + "/min: " +
        std::to_string(point.completed) + " completed, mean latency " +
        vt_ms_string(mean_ns) + "ms");
  }
  res.evidence.push_back(
      report.knee_rate_per_min
          ? "degradation knee at " +
                std::to_string(*report.knee_rate_per_min) + "/min"
          : "no degradation knee up to " + std::to_string(capacity) +
                "/min");
  res.metrics["capacity_rpm"] = capacity;
  res.metrics["knee_rate_per_min"] =
      report.knee_rate_per_min.value_or(0);
  res.verdict = throughput_verdict(report, capacity);
  res.virtual_duration =
      static_cast<VirtualTime>(report.points.size()) * kNsPerMin;
  res.stress = std::move(report);
  return res;
}

ScenarioResult run_s13(const ScenarioSpec& spec, const NetworkConfig& net,
                       const PolicySet& policy) {
  ScenarioResult res = base_result(spec);
  FtpActors actors = ftp_actors(spec, net, policy);

  Network network(net, policy);
  Reachability probe =
      network.icmp_probe(actors.client->name, actors.server->ip);
  if (!probe.reply) {
    res.verdict = Verdict::NotEnforced;
    res.evidence.push_back("echo request failed: " + probe.reason);
    res.trace = network.trace();
  res.virtual_duration = network.now();
    return res;
  }
  VirtualTime latency = network.latency_of(network.last_probe_request_id());
  std::int64_t max_ms = policy.performance.max_acceptable_latency_ms;
  res.metrics["latency_ns"] = latency;
  res.metrics["max_acceptable_ms"] = max_ms;
  res.evidence.push_back("echo request serviced in " + vt_ms_string(latency) +
                         "ms (max acceptable " + std::to_string(max_ms) +
                         "ms)");
  res.verdict = latency_verdict(latency, max_ms);
  res.trace = network.trace();
  res.virtual_duration = network.now();
  return res;
}

}  // namespace

const char* verdict_name(Verdict verdict) {
  return verdict == Verdict::Enforced ? "Enforced" : "Not Enforced";
}

std::optional<Verdict> verdict_from_name(std::string_view name) {
  if (name == "Enforced") return Verdict::Enforced;
  if (name == "Not Enforced") return Verdict::NotEnforced;
  return std::nullopt;
}

const std::vector<ScenarioSpec>& scenario_catalog() {
  static const std::vector<ScenarioSpec> kCatalog = {
      {"S1", "CWE-20", "isolation_default_deny, ip_whitelist, mac_whitelist",
       "Pairwise echo sweep over every ordered host pair", 1},
      {"S2", "CWE-290", "ip_whitelist, spoof_auth",
       "Frames claiming a whitelisted source IP, sent from an unauthorized "
       "host",
       1},
      {"S3", "CWE-290", "mac_whitelist, spoof_auth",
       "Frames claiming a whitelisted source MAC, sent from an unauthorized "
       "host",
       1},
      {"S4", "CWE-290", "static_arp",
       "ARP request advertising a forged binding for a known host", 1},
      {"S5", "CWE-281", "ftp_blocked_verbs",
       "MKD command sent to the FTP server", 1},
      {"S6", "CWE-434", "ftp_scan",
       "CP transfer carrying a malicious payload to the FTP server", 1},
      {"S7", "CWE-281", "content_routes",
       "Uploads with mismatched kinds and ports against the video route", 1},
      {"S8", "CWE-281", "content_routes",
       "Uploads with mismatched kinds and ports against the document route",
       1},
      {"S9", "CWE-281", "author_whitelist",
       "Document uploads authored by random identities", 1},
      {"S10", "CWE-444", "header_mode",
       "Duplicate Content-Length hiding a second request in the body", 1},
      {"S11", "CWE-1333", "url_blocklist, url_engine",
       "Request target crafted to stall the URL filter's regex engine", 1},
      {"S12", "CWE-400", "performance.capacity_rpm",
       "Increasing request rates up to the configured capacity", 1},
      {"S13", "CWE-400", "performance.max_acceptable_latency_ms",
       "Latency of a single request through an idle gateway", 1},
  };
  return kCatalog;
}

const ScenarioSpec* scenario_by_id(std::string_view id) {
  for (const ScenarioSpec& spec : scenario_catalog()) {
    if (spec.id == id) {
      return &spec;
    }
  }
  return nullptr;
}

ScenarioResult run_scenario(const ScenarioSpec& spec, const NetworkConfig& net,
                            const PolicySet& policy) {
  if (spec.id == "S1") return run_s1(spec, net, policy);
  if (spec.id == "S2") return run_spoof(spec, net, policy, false);
  if (spec.id == "S3") return run_spoof(spec, net, policy, true);
  if (spec.id == "S4") return run_s4(spec, net, policy);
  if (spec.id == "S5") return run_s5(spec, net, policy);
  if (spec.id == "S6") return run_s6(spec, net, policy);
  if (spec.id == "S7") {
    return run_route_matrix(spec, net, policy, FileKind::Mpeg);
  }
  if (spec.id == "S8") {
    return run_route_matrix(spec, net, policy, FileKind::Doc);
  }
  if (spec.id == "S9") return run_s9(spec, net, policy);
  if (spec.id == "S10") return run_s10(spec, net, policy);
  if (spec.id == "S11") return run_s11(spec, net, policy);
  if (spec.id == "S12") return run_s12(spec, net, policy);
  if (spec.id == "S13") return run_s13(spec, net, policy);
  throw UnknownScenarioError(spec.id);
}

ScenarioResult run_scenario_by_id(const std::string& id,
                                  const NetworkConfig& net,
                                  const PolicySet& policy,
                                  std::uint64_t seed) {
  const ScenarioSpec* spec = scenario_by_id(id);
  if (spec == nullptr) {
    throw UnknownScenarioError(id);
  }
  ScenarioSpec with_seed = *spec;
  with_seed.seed = seed;
  return run_scenario(with_seed, net, policy);
}

Verdict throughput_verdict(const StressReport& report,
                           std::int64_t capacity_rpm) {
  if (report.knee_rate_per_min && *report.knee_rate_per_min <= capacity_rpm) {
    return Verdict::NotEnforced;
  }
  return Verdict::Enforced;
}

Verdict latency_verdict(VirtualTime latency, std::int64_t max_acceptable_ms) {
  return latency <= max_acceptable_ms * kNsPerMs ? Verdict::Enforced
                                                 : Verdict::NotEnforced;
}

}  // namespace algsim
