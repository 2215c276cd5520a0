#include "algsim/alg_pipeline.hpp"

#include <utility>

#include "algsim/dpi_ftp.hpp"
#include "algsim/dpi_http.hpp"
#include "algsim/errors.hpp"
#include "algsim/ftp_command.hpp"
#include "algsim/http_message.hpp"

namespace algsim {
namespace {

constexpr int kMaxSubRequests = 8;

bool starts_with(std::string_view text, std::string_view prefix) {
  return text.size() >= prefix.size() &&
         text.substr(0, prefix.size()) == prefix;
}

std::string reject_cwe(const std::string& reason) {
  if (reason == "file-kind-mismatch") return "CWE-434";
  if (reason == "no-route-for-port-source" ||
      reason == "content-type-mismatch" ||
      reason == "author-not-whitelisted" ||
      reason == "unparseable-document") {
    return "CWE-281";
  }
  return "CWE-444";
}

}  // namespace

AlgPipeline::AlgPipeline(const NetworkConfig* net, const PolicySet* policy)
    : net_(net),
      policy_(policy),
      alg_ips_(net->alg_ip_set()),
      arp_table_(policy->static_arp) {
  if (policy_->bandwidth) {
    bucket_.emplace(policy_->bandwidth->rate_per_min,
                    policy_->bandwidth->burst);
  }
}

Frame AlgPipeline::reply_to_sender(const Frame& in, std::string payload) const {
  Frame out;
  out.src_mac = net_->alg.mac;
  out.dst_mac = in.src_mac;
  out.kind = FrameKind::Ipv4;
  out.ip = IpHeader{in.ip->dst, in.ip->src, in.ip->proto};
  if (in.l4) {
    out.l4 = L4Header{in.l4->dst_port, in.l4->src_port};
  }
  out.payload = std::move(payload);
  out.ingress_vlan = in.ingress_vlan;
  return out;
}

std::optional<Frame> AlgPipeline::toward_ip(const Frame& in,
                                            const IpAddr& dst_ip,
                                            std::uint16_t dst_port,
                                            std::string payload,
                                            std::string* fail) const {
  std::optional<VlanId> vlan = net_->vlan_of_ip(dst_ip);
  if (!vlan) {
    *fail = "unknown-destination";
    return std::nullopt;
  }
  auto bound = arp_table_.find(dst_ip);
  if (bound == arp_table_.end()) {
    *fail = "no-arp-binding";
    return std::nullopt;
  }
  Frame out = in;
  out.src_mac = net_->alg.mac;
  out.dst_mac = bound->second;
  out.ip->dst = dst_ip;
  if (out.l4) {
    out.l4->dst_port = dst_port;
  }
  out.payload = std::move(payload);
  out.ingress_vlan = *vlan;
  return out;
}

AlgOutput AlgPipeline::process_arp(const Frame& frame) {
  AlgOutput out;
  ArpMessage msg;
  try {
    msg = parse_arp(frame.payload);
  } catch (const FrameError&) {
    out.drop_reason = "arp-malformed";
    return out;
  }
  ArpOutcome result = handle_arp(*policy_, arp_table_, msg, alg_ips_,
                                 net_->alg.mac);
  arp_table_ = std::move(result.table);
  switch (result.event) {
    case ArpEvent::PoisonRejected:
      ++poison_rejections_;
      out.drop_reason = "arp-poison-rejected";
      out.drop_cwe = "CWE-290";
      out.notes.push_back("arp-poison-rejected(" + msg.sender_ip.to_string() +
                          " claimed by " + msg.sender_mac.to_string() + ")");
      return out;
    case ArpEvent::Replied: {
      out.consumed = true;
      out.notes.push_back("arp-replied(" + msg.target_ip.to_string() + ")");
      Frame reply;
      reply.src_mac = net_->alg.mac;
      reply.dst_mac = frame.src_mac;
      reply.kind = FrameKind::Arp;
      reply.payload = serialize_arp(*result.reply);
      reply.ingress_vlan = frame.ingress_vlan;
      out.responses.push_back(std::move(reply));
      return out;
    }
    case ArpEvent::Ignored:
      out.consumed = true;
      out.notes.push_back("arp-ignored");
      return out;
  }
  return out;
}

AlgOutput AlgPipeline::forward_plain(const Frame& frame, AlgOutput out) {
  if (alg_ips_.count(frame.ip->dst) != 0) {
    if (frame.ip->proto == IpProto::Icmp &&
        starts_with(frame.payload, "echo-request")) {
      std::string body = "echo-reply" + frame.payload.substr(12);
      out.responses.push_back(reply_to_sender(frame, std::move(body)));
      out.consumed = true;
      out.notes.push_back("echo-self");
      return out;
    }
    out.consumed = true;
    out.notes.push_back("gateway-absorbed");
    return out;
  }
  std::string fail;
  std::uint16_t dst_port = frame.l4 ? frame.l4->dst_port : 0;
  auto fwd = toward_ip(frame, frame.ip->dst, dst_port, frame.payload, &fail);
  if (!fwd) {
    out.drop_reason = fail;
    return out;
  }
  out.forward = std::move(*fwd);
  return out;
}

AlgOutput AlgPipeline::inspect_http(const Frame& frame, AlgOutput out) {
  const std::uint16_t ingress_port = frame.l4->dst_port;
  const IpAddr src_ip = frame.ip->src;
  std::string pending = frame.payload;
  int index = 0;
  bool reject_seen = false;

  auto reject = [&](int status, const std::string& reason,
                    const std::string& cwe) {
    HttpMessage resp = make_reject_response(status, reason);
    out.responses.push_back(reply_to_sender(frame, serialize_http(resp)));
    if (!reject_seen) {
      reject_seen = true;
      out.drop_reason = reason;
      out.drop_cwe = cwe.empty() ? reject_cwe(reason) : cwe;
    }
  };

  while (!pending.empty()) {
    if (index == kMaxSubRequests) {
      out.notes.push_back("sub-request-cap-reached(" +
                          std::to_string(pending.size()) + " bytes discarded)");
      break;
    }
    ++index;
    HttpMessage msg;
    try {
      msg = parse_http_request(pending);
    } catch (const HttpParseError&) {
      if (index == 1) {
        reject(400, "malformed request", "");
      } else {
        out.notes.push_back("unparseable-remainder(" +
                            std::to_string(pending.size()) + " bytes)");
      }
      break;
    }

    HttpReject why{0, ""};
    auto norm = normalize(msg, policy_->header_mode, &why);
    if (!norm) {
      out.notes.push_back("normalize-reject(" + std::to_string(why.status) +
                          " " + why.reason + ")");
      reject(why.status, why.reason, "CWE-444");
      break;
    }
    for (const auto& note : norm->notes) {
      out.notes.push_back(note);
    }
    pending = norm->surplus;
    if (index > 1) {
      out.notes.push_back("smuggled-sub-request(" + std::to_string(index) +
                          ")");
    }

    UrlFilterResult url = filter_url(*policy_, norm->message.target);
    out.regex_steps += url.steps;
    if (!url.allowed) {
      if (url.budget_exhausted) {
        out.notes.push_back("url-budget-exhausted(steps=" +
                            std::to_string(url.steps) + ")");
        reject(403, "url filter budget exhausted", "CWE-1333");
      } else {
        out.notes.push_back("url-blocked(" + url.matched_pattern +
                            ", steps=" + std::to_string(url.steps) + ")");
        reject(403, "url blocked", "CWE-20");
      }
      continue;
    }
    out.notes.push_back("url-ok(steps=" + std::to_string(url.steps) + ")");

    RouteDecision route = route_by_content(*policy_, *norm, ingress_port,
                                           src_ip);
    if (route.kind == RouteKind::Reject) {
      out.notes.push_back("route-reject(" + std::to_string(route.status) +
                          " " + route.reason + ")");
      reject(route.status, route.reason, "");
      continue;
    }
    const ContentRoute* rule = policy_->find_route(ingress_port, src_ip);
    if (rule->required_kind == FileKind::Doc) {
      AuthorCheck author = check_author(*policy_, norm->message.body);
      if (!author.allowed) {
        out.notes.push_back("author-rejected(" + author.reason +
                            (author.author.empty() ? std::string()
                                                   : ": " + author.author) +
                            ")");
        reject(403, author.reason, "CWE-281");
        continue;
      }
      out.notes.push_back("author-ok(" + author.author + ")");
    }

    std::string fail;
    auto fwd = toward_ip(frame, route.dest_ip, route.dest_port,
                         serialize_http(norm->message), &fail);
    if (!fwd) {
      out.notes.push_back("forward-failed(" + fail + ")");
      reject(403, fail, "");
      continue;
    }
    out.notes.push_back("routed(" + route.dest_ip.to_string() + ":" +
                        std::to_string(route.dest_port) + ")");
    if (!out.forward) {
      out.forward = std::move(*fwd);
    } else {
      out.extra_forwards.push_back(std::move(*fwd));
    }
  }

  if (out.forward) {
    out.drop_reason.clear();
    out.drop_cwe.clear();
  } else if (out.drop_reason.empty()) {
    out.drop_reason = "http-no-forward";
  }
  return out;
}

AlgOutput AlgPipeline::inspect_ftp(const Frame& frame, AlgOutput out) {
  std::string line = frame.payload;
  std::string data;
  auto crlf = frame.payload.find("\r\n");
  if (crlf != std::string::npos) {
    line = frame.payload.substr(0, crlf + 2);
    data = frame.payload.substr(crlf + 2);
  }

  FtpCommand cmd;
  try {
    cmd = parse_ftp_command(line);
  } catch (const FtpParseError&) {
    out.drop_reason = "ftp-parse-error";
    out.responses.push_back(reply_to_sender(frame, "500 syntax error\r\n"));
    return out;
  }

  FtpVerdict verb = filter_command(*policy_, cmd);
  if (verb.kind == FtpVerdictKind::Blocked) {
    out.notes.push_back("ftp-verb-blocked(" + verb.verb + ")");
    out.drop_reason = "ftp-verb-blocked";
    out.drop_cwe = "CWE-281";
    out.responses.push_back(
        reply_to_sender(frame, "550 " + verb.verb + " denied\r\n"));
    return out;
  }

  if (!data.empty()) {
    FtpVerdict scan = scan_data(*policy_, data);
    out.regex_steps += scan.steps;
    if (scan.kind == FtpVerdictKind::Malicious) {
      if (scan.budget_exhausted) {
        out.notes.push_back("ftp-scan-budget-exhausted(steps=" +
                            std::to_string(scan.steps) + ")");
        out.drop_cwe = "CWE-1333";
      } else {
        out.notes.push_back("ftp-malicious(" + scan.pattern +
                            ", steps=" + std::to_string(scan.steps) + ")");
        out.drop_cwe = "CWE-434";
      }
      out.drop_reason = "ftp-malicious-data";
      out.responses.push_back(
          reply_to_sender(frame, "550 malicious payload\r\n"));
      return out;
    }
    if (scan.kind == FtpVerdictKind::ScanSkipped) {
      out.notes.push_back("ftp-scan-skipped");
    } else {
      out.notes.push_back("ftp-scan-clean(steps=" +
                          std::to_string(scan.steps) + ")");
    }
  }

  std::string fail;
  auto fwd = toward_ip(frame, frame.ip->dst, frame.l4->dst_port,
                       frame.payload, &fail);
  if (!fwd) {
    out.drop_reason = fail;
    return out;
  }
  out.forward = std::move(*fwd);
  return out;
}

AlgOutput AlgPipeline::process(const Frame& frame, VirtualTime now) {
  AlgOutput out;
  if (frame.kind == FrameKind::Arp) {
    return process_arp(frame);
  }

  Decision decision = decide_l3(*policy_, frame, now,
                                bucket_ ? &*bucket_ : nullptr, alg_ips_);
  switch (decision.kind) {
    case DecisionKind::Deny:
      out.drop_reason = decision.reason;
      out.drop_cwe = decision.cwe;
      return out;
    case DecisionKind::Allow:
      return forward_plain(frame, std::move(out));
    case DecisionKind::ForwardToInspector:
      break;
  }
  if (decision.inspector == InspectorKind::Ftp) {
    return inspect_ftp(frame, std::move(out));
  }
  return inspect_http(frame, std::move(out));
}

}  // namespace algsim
