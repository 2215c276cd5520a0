#include "algsim/fuzz.hpp"

#include <stdexcept>

#include "algsim/file_kind.hpp"
#include "algsim/netsim.hpp"
#include "algsim/rng.hpp"

namespace algsim {
namespace {

const std::vector<std::uint16_t> kDefaultPorts = {8080, 8085, 9000};
const std::vector<std::string> kDefaultContentTypes = {
    "application/doc", "video/mpeg", "text/plain",
    "application/octet-stream"};
const std::vector<std::string> kDefaultAuthors = {"alice", "bob"};

std::string random_token(SplitMix64& rng) {
  static const char kHex[] = "0123456789abcdef";
  std::string out = "user-";
  for (int i = 0; i < 8; ++i) {
    out += kHex[rng.below(16)];
  }
  return out;
}

std::string random_garbage(SplitMix64& rng) {
  std::size_t len = 1 + rng.below(24);
  std::string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    out += static_cast<char>('!' + rng.below(94));
  }
  return out;
}

}  // namespace

std::vector<FuzzHttpCase> gen_fuzz_http(const FuzzHttpTemplate& tmpl,
                                        std::uint64_t seed, std::size_t n) {
  const auto& ports = tmpl.ports.empty() ? kDefaultPorts : tmpl.ports;
  const auto& content_types =
      tmpl.content_types.empty() ? kDefaultContentTypes : tmpl.content_types;
  const auto& authors =
      tmpl.authors.empty() ? kDefaultAuthors : tmpl.authors;

  SplitMix64 rng(seed);
  std::vector<FuzzHttpCase> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    FuzzHttpCase item;
    item.ingress_port = ports[rng.below(ports.size())];

    std::string author = rng.chance(1, 2)
                             ? authors[rng.below(authors.size())]
                             : random_token(rng);
    std::string body;
    switch (rng.below(3)) {
      case 0:
        body = make_doc_body(author, "fuzz-" + std::to_string(i));
        break;
      case 1:
        body = make_mpeg_body("fuzz-" + std::to_string(i));
        break;
      default:
        body = random_garbage(rng);
    }

    HttpMessage& req = item.request;
    req.kind = HttpKind::Request;
    req.method = tmpl.method;
    req.target = tmpl.target;
    req.add_header("Host", "alg");
    req.add_header("Content-Type",
                   content_types[rng.below(content_types.size())]);
    std::uint64_t duplicates = rng.below(4);
    for (std::uint64_t d = 0; d < duplicates; ++d) {
      req.add_header("Content-Type",
                     content_types[rng.below(content_types.size())]);
    }
    req.body = std::move(body);
    req.add_header("Content-Length", std::to_string(req.body.size()));
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<std::string> mutate(const std::string& seed_bytes,
                                std::uint64_t seed, std::size_t n) {
  SplitMix64 rng(seed);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string m = seed_bytes;
    if (m.empty()) {
      out.push_back(m);
      continue;
    }
    switch (rng.below(3)) {
      case 0: {
        std::size_t pos = rng.below(m.size());
        m[pos] = static_cast<char>(m[pos] ^ (1u << rng.below(8)));
        break;
      }
      case 1: {
        std::size_t pos = rng.below(m.size());
        std::size_t len = 1 + rng.below(std::min<std::size_t>(8, m.size() - pos));
        m.insert(pos + len, m.substr(pos, len));
        break;
      }
      default: {
        std::size_t pos = rng.below(m.size());
        std::size_t len = 1 + rng.below(std::min<std::size_t>(4, m.size() - pos));
        std::string span = m.substr(pos, len);
        std::uint64_t repeat = 1 + rng.below(64);
        std::string expanded;
        for (std::uint64_t r = 0; r < repeat; ++r) {
          expanded += span;
        }
        m = m.substr(0, pos) + expanded + m.substr(pos + len);
        break;
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

StressReport stress(const NetworkConfig& net, const PolicySet& policy,
                    const std::vector<std::int64_t>& rate_schedule) {
  for (std::size_t i = 0; i < rate_schedule.size(); ++i) {
    if (rate_schedule[i] <= 0 ||
        (i > 0 && rate_schedule[i] <= rate_schedule[i - 1])) {
      throw std::invalid_argument("stress rates must be strictly increasing");
    }
    if (rate_schedule[i] > 1'000'000) {
      throw std::invalid_argument(
          "stress rate above 1000000 per minute is not supported");
    }
  }

  const HostConfig* source = net.host_by_name("jmeter");
  if (source == nullptr && !net.hosts.empty()) {
    source = &net.hosts.back();
  }
  if (source == nullptr) {
    throw std::invalid_argument("stress needs at least one host");
  }
  IpAddr gateway_ip = net.alg.ip_by_vlan.at(source->vlan);

  StressReport report;
  for (std::int64_t rate : rate_schedule) {
    Network network(net, policy,
                    NetworkOptions{false, false, 10'000'000});
    VirtualTime spacing = kNsPerMin / rate;
    std::vector<std::uint64_t> ids;
    ids.reserve(static_cast<std::size_t>(rate));
    for (std::int64_t k = 0; k < rate; ++k) {
      Frame frame;
      frame.src_mac = source->mac;
      frame.dst_mac = net.alg.mac;
      frame.kind = FrameKind::Ipv4;
      frame.ip = IpHeader{source->ip, gateway_ip, IpProto::Tcp};
      frame.l4 = L4Header{49152, 8080};
      frame.payload = "GET / HTTP/1.1\r\nHost: alg\r\n\r\n";
      ids.push_back(network.inject_frame(source->name, frame, k * spacing));
    }
    network.run_until_idle();

    StressPoint point;
    point.rate_per_min = rate;
    for (std::uint64_t id : ids) {
      const FrameRecord* rec = network.record(id);
      if (rec != nullptr && rec->arrival && rec->departure) {
        ++point.completed;
        point.sum_latency_ns += *rec->departure - *rec->arrival;
      }
    }
    report.points.push_back(point);
    if (!report.knee_rate_per_min &&
        point.sum_latency_ns >
            2 * net.alg.base_service_cost * point.completed) {
      report.knee_rate_per_min = rate;
    }
  }
  return report;
}

}  // namespace algsim
