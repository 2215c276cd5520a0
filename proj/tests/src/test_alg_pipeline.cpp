#include <string>
#include <vector>

#include "doctest.h"

#include "algsim/alg_pipeline.hpp"
#include "algsim/dpi_http.hpp"
#include "algsim/file_kind.hpp"
#include "algsim/http_message.hpp"
#include "test_util.hpp"

using namespace algsim;

namespace {

const IpAddr kAlgVlan10 = IpAddr::parse("10.10.10.1");

Frame from_host(const char* name, const IpAddr& dst_ip,
                std::uint16_t dst_port, std::string payload) {
  const HostConfig* src = testu::golden_network().host_by_name(name);
  REQUIRE(src != nullptr);
  Frame frame = testu::tcp_frame(*src, testu::golden_network().alg.mac,
                                 dst_ip, dst_port, std::move(payload));
  frame.ingress_vlan = src->vlan;
  return frame;
}

std::string chained_get(const std::string& target, std::string tail) {
  return "GET " + target +
         " HTTP/1.1\r\nHost: gw\r\nContent-Length: 0\r\n\r\n" +
         std::move(tail);
}

bool has_note_prefix(const AlgOutput& out, const std::string& prefix) {
  for (const auto& note : out.notes) {
    if (note.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

int terminal_states(const AlgOutput& out) {
  return int(out.forward.has_value()) + int(out.consumed) +
         int(!out.drop_reason.empty());
}

}  // namespace

TEST_CASE("every serviced frame lands in exactly one terminal state") {
  AlgPipeline pipeline(&testu::golden_network(), &testu::golden_policy());
  std::vector<AlgOutput> outputs;

  outputs.push_back(pipeline.process(
      from_host("client-ftp", IpAddr::parse("10.10.20.5"), 40000, "hi"), 0));
  Frame echo = from_host("client-ftp", kAlgVlan10, 0, "");
  echo.ip->proto = IpProto::Icmp;
  echo.l4.reset();
  echo.payload = "echo-request x";
  outputs.push_back(pipeline.process(echo, 0));
  Frame udp = from_host("client-ftp", IpAddr::parse("10.10.20.5"), 53, "");
  udp.ip->proto = IpProto::Udp;
  outputs.push_back(pipeline.process(udp, 0));
  outputs.push_back(pipeline.process(
      from_host("client-ftp", IpAddr::parse("10.10.20.5"), 21,
                "MKD secret\r\n"),
      0));
  outputs.push_back(pipeline.process(
      from_host("client-doc", kAlgVlan10, 8080, "not http"), 0));

  for (const AlgOutput& out : outputs) {
    CHECK(terminal_states(out) == 1);
  }
}

TEST_CASE("arp frames are handled against the static table") {
  AlgPipeline pipeline(&testu::golden_network(), &testu::golden_policy());
  const MacAddr alg_mac = testu::golden_network().alg.mac;

  auto arp_frame = [&](const ArpMessage& msg, const char* src_host) {
    const HostConfig* src = testu::golden_network().host_by_name(src_host);
    Frame frame;
    frame.src_mac = src->mac;
    frame.dst_mac = MacAddr::broadcast();
    frame.kind = FrameKind::Arp;
    frame.payload = serialize_arp(msg);
    frame.ingress_vlan = src->vlan;
    return frame;
  };

  SUBCASE("a malformed payload is dropped") {
    Frame frame;
    frame.src_mac = MacAddr::parse("02:00:00:00:14:06");
    frame.dst_mac = MacAddr::broadcast();
    frame.kind = FrameKind::Arp;
    frame.payload = "xx";
    frame.ingress_vlan = 20;
    AlgOutput out = pipeline.process(frame, 0);
    CHECK(out.drop_reason == "arp-malformed");
  }

  SUBCASE("a poison attempt is dropped, counted, and never learned") {
    ArpMessage poison;
    poison.op = ArpOp::Reply;
    poison.sender_ip = IpAddr::parse("10.10.20.5");
    poison.sender_mac = MacAddr::parse("02:00:00:00:14:06");
    poison.target_ip = IpAddr::parse("10.10.20.1");
    poison.target_mac = alg_mac;
    AlgOutput out = pipeline.process(arp_frame(poison, "spoof"), 0);
    CHECK(out.drop_reason == "arp-poison-rejected");
    CHECK(out.drop_cwe == "CWE-290");
    CHECK(pipeline.poison_rejections() == 1);
    CHECK(pipeline.arp_table() == testu::golden_policy().static_arp);
  }

  SUBCASE("a request for a gateway ip gets a unicast reply") {
    ArpMessage req;
    req.op = ArpOp::Request;
    req.sender_ip = IpAddr::parse("10.10.10.2");
    req.sender_mac = MacAddr::parse("02:00:00:00:0a:02");
    req.target_ip = kAlgVlan10;
    AlgOutput out = pipeline.process(arp_frame(req, "client-ftp"), 0);
    CHECK(out.consumed);
    REQUIRE(out.responses.size() == 1);
    CHECK(out.responses[0].dst_mac == req.sender_mac);
    CHECK(out.responses[0].kind == FrameKind::Arp);
    ArpMessage reply = parse_arp(out.responses[0].payload);
    CHECK(reply.op == ArpOp::Reply);
    CHECK(reply.sender_ip == kAlgVlan10);
    CHECK(reply.sender_mac == alg_mac);
  }

  SUBCASE("consistent gratuitous announcements are ignored") {
    ArpMessage noise;
    noise.op = ArpOp::Reply;
    noise.sender_ip = IpAddr::parse("10.10.10.2");
    noise.sender_mac = MacAddr::parse("02:00:00:00:0a:02");
    noise.target_ip = IpAddr::parse("10.10.10.9");
    AlgOutput out = pipeline.process(arp_frame(noise, "client-ftp"), 0);
    CHECK(out.consumed);
    CHECK(has_note_prefix(out, "arp-ignored"));
  }
}

TEST_CASE("plain forwarding rewrites addressing or fails cleanly") {
  AlgPipeline pipeline(&testu::golden_network(), &testu::golden_policy());

  SUBCASE("a destination outside every subnet cannot be routed") {
    AlgOutput out = pipeline.process(
        from_host("client-ftp", IpAddr::parse("172.16.0.1"), 40000, ""), 0);
    CHECK(out.drop_reason == "unknown-destination");
  }

  SUBCASE("a destination without an arp binding cannot be reached") {
    AlgOutput out = pipeline.process(
        from_host("client-ftp", IpAddr::parse("10.10.10.200"), 40000, ""),
        0);
    CHECK(out.drop_reason == "no-arp-binding");
  }

  SUBCASE("a forwarded frame carries gateway source and bound destination") {
    AlgOutput out = pipeline.process(
        from_host("client-ftp", IpAddr::parse("10.10.20.5"), 40000, "data"),
        0);
    REQUIRE(out.forward.has_value());
    CHECK(out.forward->src_mac == testu::golden_network().alg.mac);
    CHECK(out.forward->dst_mac == MacAddr::parse("02:00:00:00:14:05"));
    CHECK(out.forward->ingress_vlan == 20);
    CHECK(out.forward->payload == "data");
  }

  SUBCASE("echo requests to a gateway ip are answered in place") {
    Frame echo = from_host("client-ftp", kAlgVlan10, 0, "");
    echo.ip->proto = IpProto::Icmp;
    echo.l4.reset();
    echo.payload = "echo-request ping";
    AlgOutput out = pipeline.process(echo, 0);
    CHECK(out.consumed);
    REQUIRE(out.responses.size() == 1);
    CHECK(out.responses[0].payload == "echo-reply ping");
    CHECK(out.responses[0].dst_mac == echo.src_mac);
  }

  SUBCASE("other traffic to a gateway ip is absorbed") {
    Frame frame = from_host("client-ftp", kAlgVlan10, 40000, "anything");
    AlgOutput out = pipeline.process(frame, 0);
    CHECK(out.consumed);
    CHECK(has_note_prefix(out, "gateway-absorbed"));
  }
}

TEST_CASE("http inspection walks smuggled sub-requests") {
  AlgPipeline pipeline(&testu::golden_network(), &testu::golden_policy());

  SUBCASE("a duplicate content-length smuggles a second request") {
    std::string hidden =
        "GET /status HTTP/1.1\r\nHost: gw\r\nContent-Length: 0\r\n\r\n";
    std::string body = "XXXX" + hidden;
    std::string wire =
        "POST /upload HTTP/1.1\r\nHost: gw\r\nContent-Type: video/mpeg\r\n"
        "Content-Length: " + std::to_string(body.size()) + "\r\n"
        "Content-Length: 4\r\n\r\n" + body;
    AlgOutput out =
        pipeline.process(from_host("client-mpeg", kAlgVlan10, 8085, wire), 0);

    CHECK(has_note_prefix(out, "smuggled-sub-request(2)"));
    REQUIRE(out.responses.size() == 2);
    for (const Frame& resp : out.responses) {
      HttpMessage msg = parse_http_response(resp.payload);
      CHECK(msg.status == 415);
    }
    // The first rejection owns the drop verdict.
    CHECK(out.drop_reason == "file-kind-mismatch");
    CHECK(out.drop_cwe == "CWE-434");
    CHECK_FALSE(out.forward.has_value());
  }

  SUBCASE("regex work accumulates across sub-requests") {
    std::string wire = chained_get(
        "/status", chained_get("/health", std::string()));
    AlgOutput out =
        pipeline.process(from_host("client-mpeg", kAlgVlan10, 8085, wire), 0);
    std::int64_t expected =
        filter_url(testu::golden_policy(), "/status").steps +
        filter_url(testu::golden_policy(), "/health").steps;
    CHECK(out.regex_steps == expected);
  }

  SUBCASE("the sub-request chain is capped") {
    std::string wire = chained_get("/9", std::string());
    for (int i = 8; i >= 0; --i) {
      wire = chained_get("/" + std::to_string(i), wire);
    }
    AlgOutput out =
        pipeline.process(from_host("client-mpeg", kAlgVlan10, 8085, wire), 0);
    CHECK(has_note_prefix(out, "sub-request-cap-reached"));
    CHECK(out.responses.size() == 8);
  }

  SUBCASE("a malformed first request earns a 400") {
    AlgOutput out = pipeline.process(
        from_host("client-doc", kAlgVlan10, 8080, "not http"), 0);
    CHECK(out.drop_reason == "malformed request");
    REQUIRE(out.responses.size() == 1);
    CHECK(parse_http_response(out.responses[0].payload).status == 400);
  }

  SUBCASE("a clean upload is rewritten toward the routed server") {
    std::string body = make_mpeg_body("movie");
    HttpMessage req;
    req.method = "POST";
    req.target = "/upload";
    req.add_header("Host", "gw");
    req.add_header("Content-Type", "video/mpeg");
    req.add_header("Content-Length", std::to_string(body.size()));
    req.body = body;
    AlgOutput out = pipeline.process(
        from_host("client-mpeg", kAlgVlan10, 8085, serialize_http(req)), 0);
    REQUIRE(out.forward.has_value());
    CHECK(out.forward->ip->dst == IpAddr::parse("10.10.20.5"));
    CHECK(out.forward->l4->dst_port == 80);
    CHECK(out.forward->dst_mac == MacAddr::parse("02:00:00:00:14:05"));
    CHECK(out.responses.empty());
  }
}

TEST_CASE("ftp inspection answers on the control channel") {
  AlgPipeline pipeline(&testu::golden_network(), &testu::golden_policy());
  const IpAddr ftp_server = IpAddr::parse("10.10.20.5");

  SUBCASE("a blocked verb gets a 550 and never crosses") {
    AlgOutput out = pipeline.process(
        from_host("client-ftp", ftp_server, 21, "MKD secret\r\n"), 0);
    CHECK(out.drop_reason == "ftp-verb-blocked");
    CHECK(out.drop_cwe == "CWE-281");
    REQUIRE(out.responses.size() == 1);
    CHECK(out.responses[0].payload == "550 MKD denied\r\n");
    CHECK(out.responses[0].ip->dst == IpAddr::parse("10.10.10.2"));
  }

  SUBCASE("an unparseable control line gets a 500") {
    AlgOutput out = pipeline.process(
        from_host("client-ftp", ftp_server, 21, "123 foo\r\n"), 0);
    CHECK(out.drop_reason == "ftp-parse-error");
    REQUIRE(out.responses.size() == 1);
    CHECK(out.responses[0].payload == "500 syntax error\r\n");
  }

  SUBCASE("an allowed verb is forwarded verbatim") {
    AlgOutput out = pipeline.process(
        from_host("client-ftp", ftp_server, 21, "LIST\r\n"), 0);
    REQUIRE(out.forward.has_value());
    CHECK(out.forward->payload == "LIST\r\n");
    CHECK(out.responses.empty());
  }

  SUBCASE("transfer data is not scanned when scanning is off") {
    AlgOutput out = pipeline.process(
        from_host("client-ftp", ftp_server, 21, "STOR a.bin\r\nEVIL"), 0);
    REQUIRE(out.forward.has_value());
    CHECK(has_note_prefix(out, "ftp-scan-skipped"));
    CHECK(out.regex_steps == 0);
  }
}

TEST_CASE("ftp scanning distinguishes malware hits from budget blowups") {
  PolicySet policy = testu::mitigated_policy();
  AlgPipeline pipeline(&testu::golden_network(), &policy);

  auto authed = [&](std::string payload) {
    Frame frame = from_host("client-ftp", IpAddr::parse("10.10.20.5"), 21,
                            std::move(payload));
    frame.auth_token = policy.auth_tokens.at(frame.ip->src);
    return frame;
  };

  SUBCASE("a marker hit is malware, not a resource problem") {
    AlgOutput out = pipeline.process(authed("STOR a.bin\r\nxxEVILxx"), 0);
    CHECK(out.drop_reason == "ftp-malicious-data");
    CHECK(out.drop_cwe == "CWE-434");
    REQUIRE(out.responses.size() == 1);
    CHECK(out.responses[0].payload == "550 malicious payload\r\n");
  }

  SUBCASE("budget exhaustion is a resource verdict") {
    PolicySet tight = testu::mitigated_policy();
    tight.regex_budget = 3;
    AlgPipeline squeezed(&testu::golden_network(), &tight);
    Frame frame = from_host("client-ftp", IpAddr::parse("10.10.20.5"), 21,
                            "STOR a.bin\r\nperfectly clean data");
    frame.auth_token = tight.auth_tokens.at(frame.ip->src);
    AlgOutput out = squeezed.process(frame, 0);
    CHECK(out.drop_reason == "ftp-malicious-data");
    CHECK(out.drop_cwe == "CWE-1333");
    CHECK(has_note_prefix(out, "ftp-scan-budget-exhausted"));
  }

  SUBCASE("clean data still charges scan steps") {
    AlgOutput out = pipeline.process(authed("STOR a.bin\r\nclean data"), 0);
    REQUIRE(out.forward.has_value());
    CHECK(out.regex_steps > 0);
    CHECK(has_note_prefix(out, "ftp-scan-clean"));
  }
}
