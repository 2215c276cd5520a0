#include "algsim/netsim.hpp"

#include <utility>

#include "algsim/errors.hpp"
#include "algsim/ftp_command.hpp"
#include "algsim/http_message.hpp"
#include "text_util.hpp"

namespace algsim {
namespace {

bool starts_with(std::string_view text, std::string_view prefix) {
  return text.size() >= prefix.size() &&
         text.substr(0, prefix.size()) == prefix;
}

std::string describe(const Frame& frame) {
  if (frame.kind == FrameKind::Arp) {
    return "arp len=" + std::to_string(frame.payload.size());
  }
  std::string out{ip_proto_name(frame.ip->proto)};
  out += ' ';
  out += frame.ip->src.to_string();
  if (frame.l4) {
    out += ':' + std::to_string(frame.l4->src_port);
  }
  out += "->";
  out += frame.ip->dst.to_string();
  if (frame.l4) {
    out += ':' + std::to_string(frame.l4->dst_port);
  }
  out += " len=" + std::to_string(frame.payload.size());
  return out;
}

std::string join_notes(const std::vector<std::string>& notes) {
  std::string out;
  for (const auto& note : notes) {
    if (!out.empty()) out += "; ";
    out += note;
  }
  return out;
}

}  // namespace

const char* trace_action_name(TraceAction action) {
  switch (action) {
    case TraceAction::Inject:
      return "inject";
    case TraceAction::Switch:
      return "switch";
    case TraceAction::Enqueue:
      return "enqueue";
    case TraceAction::Forward:
      return "forward";
    case TraceAction::Deliver:
      return "deliver";
    case TraceAction::Drop:
      return "drop";
  }
  return "?";
}

Network::Network(NetworkConfig net, PolicySet policy, NetworkOptions options)
    : net_(std::move(net)),
      policy_(std::move(policy)),
      options_(options),
      pipeline_(&net_, &policy_) {
  for (const auto& [ip, mac] : policy_.static_arp) {
    if (net_.host_by_ip(ip) == nullptr) {
      throw ConfigError("", "static_arp entry " + ip.to_string() +
                                " does not match any configured host");
    }
  }
  if (options_.record_inboxes) {
    for (const auto& host : net_.hosts) {
      inboxes_[host.name];
    }
  }
}

std::uint64_t Network::new_record(Frame frame, VlanId origin_vlan,
                                  bool via_gateway) {
  std::uint64_t id = next_frame_id_++;
  FrameRecord rec;
  rec.frame = std::move(frame);
  rec.origin_vlan = origin_vlan;
  rec.via_gateway = via_gateway;
  records_.emplace(id, std::move(rec));
  return id;
}

void Network::schedule_wire(VirtualTime at, std::uint64_t frame_id,
                            Frame frame, std::string source_node) {
  Event ev;
  ev.time = at;
  ev.seq = next_seq_++;
  ev.kind = Event::Kind::Wire;
  ev.frame_id = frame_id;
  ev.frame = std::move(frame);
  ev.source_node = std::move(source_node);
  events_.push(std::move(ev));
}

std::uint64_t Network::inject_frame(const std::string& host_name, Frame frame,
                                    VirtualTime at) {
  const HostConfig* host = net_.host_by_name(host_name);
  if (host == nullptr) {
    throw UnknownHostError(host_name);
  }
  if (at < now_) {
    throw std::invalid_argument("inject time " + vt_ms_string(at) +
                                "ms is before simulation time " +
                                vt_ms_string(now_) + "ms");
  }
  frame.ingress_vlan = host->vlan;
  validate_frame(frame, net_.mtu);
  std::uint64_t id = new_record(frame, host->vlan, false);
  schedule_wire(at, id, std::move(frame), host_name);
  return id;
}

void Network::add_trace(VirtualTime time, std::uint64_t frame_id,
                        TraceAction action, std::string node,
                        std::string detail) {
  if (!options_.record_trace) return;
  trace_.push_back(TraceEntry{time, frame_id, action, std::move(node),
                              std::move(detail)});
}

void Network::run_until_idle() {
  while (!events_.empty()) {
    if (++events_processed_ > options_.event_budget) {
      throw SimOverrunError(options_.event_budget);
    }
    Event ev = events_.top();
    events_.pop();
    now_ = ev.time;
    if (ev.kind == Event::Kind::Wire) {
      handle_wire(ev);
    } else {
      handle_emit(ev);
    }
  }
}

void Network::handle_wire(const Event& ev) {
  const Frame& frame = ev.frame;
  records_[ev.frame_id].frame = frame;
  if (ev.source_node != "alg") {
    add_trace(ev.time, ev.frame_id, TraceAction::Inject, ev.source_node,
              describe(frame));
  }
  std::string switch_node = "switch-" + std::to_string(frame.ingress_vlan);

  if (frame.dst_mac.is_broadcast() || frame.dst_mac == net_.alg.mac) {
    add_trace(ev.time, ev.frame_id, TraceAction::Switch, switch_node,
              "to-gateway");
    enqueue_at_gateway(ev.time, ev.frame_id, frame);
    return;
  }
  const HostConfig* host = net_.host_by_mac(frame.dst_mac);
  if (host == nullptr) {
    drop(ev.time, ev.frame_id, switch_node, "unknown-dst-mac", "");
    return;
  }
  if (host->vlan != frame.ingress_vlan) {
    drop(ev.time, ev.frame_id, switch_node, "inter-vlan-without-alg", "");
    return;
  }
  add_trace(ev.time, ev.frame_id, TraceAction::Switch, switch_node,
            "local-delivery");
  deliver(ev.time, ev.frame_id, frame, *host);
}

void Network::enqueue_at_gateway(VirtualTime at, std::uint64_t frame_id,
                                 const Frame& frame) {
  AlgOutput out = pipeline_.process(frame, at);
  VirtualTime service =
      net_.alg.base_service_cost +
      net_.alg.per_byte_cost * static_cast<VirtualTime>(frame.payload.size()) +
      net_.alg.regex_step_cost * out.regex_steps;
  VirtualTime start = std::max(at, gateway_busy_until_);
  VirtualTime departure = start + service;
  gateway_busy_until_ = departure;

  FrameRecord& rec = records_[frame_id];
  rec.arrival = at;
  rec.departure = departure;
  rec.regex_steps = out.regex_steps;
  for (const auto& note : out.notes) {
    rec.notes.push_back(note);
  }
  add_trace(at, frame_id, TraceAction::Enqueue, "alg",
            "service=" + vt_ms_string(service) +
                "ms steps=" + std::to_string(out.regex_steps));

  Event ev;
  ev.time = departure;
  ev.seq = next_seq_++;
  ev.kind = Event::Kind::GatewayEmit;
  ev.frame_id = frame_id;
  ev.frame = frame;
  ev.emit = std::move(out);
  events_.push(std::move(ev));
}

void Network::handle_emit(const Event& ev) {
  const AlgOutput& out = ev.emit;

  if (out.forward) {
    add_trace(ev.time, ev.frame_id, TraceAction::Forward, "alg",
              describe(*out.forward));
    records_[ev.frame_id].via_gateway = true;
    schedule_wire(ev.time, ev.frame_id, *out.forward, "alg");
  } else if (out.consumed) {
    FrameRecord& rec = records_[ev.frame_id];
    rec.end = FrameRecord::End::Delivered;
    rec.end_node = "alg";
    add_trace(ev.time, ev.frame_id, TraceAction::Deliver, "alg",
              join_notes(out.notes));
  } else {
    drop(ev.time, ev.frame_id, "alg", out.drop_reason, out.drop_cwe);
  }

  for (const Frame& resp : out.responses) {
    std::uint64_t id = new_record(resp, resp.ingress_vlan, true);
    add_trace(ev.time, id, TraceAction::Inject, "alg", describe(resp));
    schedule_wire(ev.time, id, resp, "alg");
  }
  for (const Frame& fwd : out.extra_forwards) {
    std::uint64_t id = new_record(fwd, fwd.ingress_vlan, true);
    add_trace(ev.time, id, TraceAction::Forward, "alg", describe(fwd));
    schedule_wire(ev.time, id, fwd, "alg");
  }
}

void Network::deliver(VirtualTime at, std::uint64_t frame_id,
                      const Frame& frame, const HostConfig& host) {
  FrameRecord& rec = records_[frame_id];
  rec.end = FrameRecord::End::Delivered;
  rec.end_node = host.name;
  add_trace(at, frame_id, TraceAction::Deliver, host.name, describe(frame));
  if (options_.record_inboxes) {
    inboxes_[host.name].emplace_back(at, frame);
  }
  std::optional<Frame> resp = auto_response(frame, host);
  if (resp) {
    std::uint64_t id = new_record(*resp, host.vlan, false);
    schedule_wire(at, id, std::move(*resp), host.name);
  }
}

void Network::drop(VirtualTime at, std::uint64_t frame_id,
                   const std::string& node, const std::string& reason,
                   const std::string& cwe) {
  FrameRecord& rec = records_[frame_id];
  rec.end = FrameRecord::End::Dropped;
  rec.end_node = node;
  rec.drop_reason = reason;
  rec.drop_cwe = cwe;
  add_trace(at, frame_id, TraceAction::Drop, node, reason);
}

std::optional<Frame> Network::auto_response(const Frame& frame,
                                            const HostConfig& host) const {
  if (frame.kind != FrameKind::Ipv4) return std::nullopt;
  if (frame.ip->dst != host.ip || frame.dst_mac != host.mac) {
    return std::nullopt;
  }

  std::string payload;
  if (frame.ip->proto == IpProto::Icmp) {
    if (!starts_with(frame.payload, "echo-request")) return std::nullopt;
    payload = "echo-reply" + frame.payload.substr(12);
  } else if (frame.ip->proto == IpProto::Tcp) {
    bool handled = false;
    try {
      HttpMessage req = parse_http_request(frame.payload);
      HttpMessage resp;
      resp.kind = HttpKind::Response;
      resp.status = 200;
      resp.reason = "OK";
      resp.body = "ok";
      resp.add_header("Content-Type", "text/plain");
      resp.add_header("Content-Length", "2");
      payload = serialize_http(resp);
      handled = true;
    } catch (const HttpParseError&) {
    }
    if (!handled) {
      try {
        FtpCommand cmd = parse_ftp_command(frame.payload);
        payload = "200 " + cmd.verb + " ok\r\n";
        handled = true;
      } catch (const FtpParseError&) {
      }
    }
    if (!handled) return std::nullopt;
  } else {
    return std::nullopt;
  }

  Frame out;
  out.src_mac = host.mac;
  out.dst_mac = frame.src_mac;
  out.kind = FrameKind::Ipv4;
  out.ip = IpHeader{host.ip, frame.ip->src, frame.ip->proto};
  if (frame.l4) {
    out.l4 = L4Header{frame.l4->dst_port, frame.l4->src_port};
  }
  out.payload = std::move(payload);
  out.ingress_vlan = host.vlan;
  auto token = policy_.auth_tokens.find(host.ip);
  if (token != policy_.auth_tokens.end()) {
    out.auth_token = token->second;
  }
  return out;
}

Reachability Network::icmp_probe(const std::string& src_host,
                                 const IpAddr& dst_ip) {
  const HostConfig* src = net_.host_by_name(src_host);
  if (src == nullptr) {
    throw UnknownHostError(src_host);
  }
  if (src->ip == dst_ip) {
    return Reachability{true, "self", ""};
  }

  std::string nonce = "probe-" + std::to_string(++probe_counter_);
  Frame request;
  request.src_mac = src->mac;
  request.kind = FrameKind::Ipv4;
  request.ip = IpHeader{src->ip, dst_ip, IpProto::Icmp};
  request.payload = "echo-request " + nonce;
  auto token = policy_.auth_tokens.find(src->ip);
  if (token != policy_.auth_tokens.end()) {
    request.auth_token = token->second;
  }

  const VlanConfig* vlan = net_.vlan_by_id(src->vlan);
  const HostConfig* direct = net_.host_by_ip(dst_ip);
  if (vlan->subnet.contains(dst_ip) && direct != nullptr) {
    request.dst_mac = direct->mac;
  } else {
    request.dst_mac = net_.alg.mac;
  }

  last_probe_request_ = inject_frame(src_host, request, now_);
  run_until_idle();

  std::string want = "echo-reply " + nonce;
  if (options_.record_inboxes) {
    for (const auto& [at, frame] : inboxes_.at(src_host)) {
      if (frame.payload == want) {
        return Reachability{true, "", ""};
      }
    }
  }
  for (const auto& [id, rec] : records_) {
    if (rec.frame.payload == want &&
        rec.end == FrameRecord::End::Dropped) {
      return Reachability{false, rec.drop_reason, rec.end_node};
    }
  }
  const FrameRecord& req = records_.at(last_probe_request_);
  if (req.end == FrameRecord::End::Dropped) {
    return Reachability{false, req.drop_reason, req.end_node};
  }
  return Reachability{false, "no-reply", req.end_node};
}

VirtualTime Network::latency_of(std::uint64_t frame_id) const {
  auto it = records_.find(frame_id);
  if (it == records_.end() || !it->second.arrival || !it->second.departure) {
    throw NotCompletedError(frame_id);
  }
  return *it->second.departure - *it->second.arrival;
}

const std::vector<std::pair<VirtualTime, Frame>>& Network::inbox(
    const std::string& host_name) const {
  auto it = inboxes_.find(host_name);
  if (it == inboxes_.end()) {
    throw UnknownHostError(host_name);
  }
  return it->second;
}

const FrameRecord* Network::record(std::uint64_t frame_id) const {
  auto it = records_.find(frame_id);
  return it == records_.end() ? nullptr : &it->second;
}

std::vector<std::uint64_t> Network::unresolved_frames() const {
  std::vector<std::uint64_t> out;
  for (const auto& [id, rec] : records_) {
    if (rec.end == FrameRecord::End::Pending) {
      out.push_back(id);
    }
  }
  return out;
}

void write_trace_jsonl(const std::vector<TraceEntry>& entries,
                       std::ostream& os) {
  for (const TraceEntry& entry : entries) {
    os << "{\"time\":" << vt_ms_string(entry.time)
       << ",\"frame_id\":" << entry.frame_id << ",\"node\":\""
       << textu::json_escape(entry.node) << "\",\"action\":\""
       << trace_action_name(entry.action) << "\",\"detail\":\""
       << textu::json_escape(entry.detail) << "\"}\n";
  }
}

void Network::write_trace_jsonl(std::ostream& os) const {
  algsim::write_trace_jsonl(trace_, os);
}

bool has_inter_vlan_bypass(const Network& network) {
  for (const auto& [id, rec] : network.records()) {
    if (rec.end != FrameRecord::End::Delivered) continue;
    if (rec.end_node == "alg") continue;
    if (rec.via_gateway) continue;
    const HostConfig* host = network.config().host_by_name(rec.end_node);
    if (host != nullptr && host->vlan != rec.origin_vlan) {
      return true;
    }
  }
  return false;
}

}  // namespace algsim
