#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algsim/http_message.hpp"
#include "algsim/net_config.hpp"
#include "algsim/policy.hpp"
#include "algsim/vtime.hpp"

namespace algsim {

// Template for generated HTTP upload attempts. The generator varies the
// ingress port, the declared Content-Type, the body's magic (document,
// video, or garbage), the author string, and how many duplicate
// Content-Type headers it appends (0..3). Empty pools fall back to the
// built-in defaults so a default-constructed template is usable as-is.
struct FuzzHttpTemplate {
  std::string method = "POST";
  std::string target = "/upload";
  std::vector<std::uint16_t> ports;
  std::vector<std::string> content_types;
  std::vector<std::string> authors;
};

// One generated case: the request plus the gateway port it is aimed at.
// The port rides alongside the message because it is addressing, not
// payload, and the route check needs both.
struct FuzzHttpCase {
  HttpMessage request;
  std::uint16_t ingress_port = 0;
};

// Deterministic generation: the same (template, seed, n) always yields the
// same sequence.
std::vector<FuzzHttpCase> gen_fuzz_http(const FuzzHttpTemplate& tmpl,
                                        std::uint64_t seed, std::size_t n);

// Deterministic mutation of captured bytes. Three operators: single-bit
// flip, duplication of a short span, and run-length expansion of a span
// repeated up to 64 times (the operator that turns "STOR x" into
// "STOR xxxxxxxx").
std::vector<std::string> mutate(const std::string& seed_bytes,
                                std::uint64_t seed, std::size_t n);

struct StressPoint {
  std::int64_t rate_per_min = 0;
  std::int64_t completed = 0;
  std::int64_t sum_latency_ns = 0;

  double mean_latency_ms() const {
    if (completed == 0) return 0.0;
    return static_cast<double>(sum_latency_ns) /
           (static_cast<double>(completed) * 1e6);
  }
};

struct StressReport {
  std::vector<StressPoint> points;
  std::optional<std::int64_t> knee_rate_per_min;
};

// Offers each rate for one virtual minute on a fresh network: uniformly
// spaced minimal GET requests from the stress host (the host named
// "jmeter" when present, otherwise the last configured host) to the
// gateway. The knee is the first rate whose mean gateway latency exceeds
// twice the base service cost; the comparison is done in integer
// nanoseconds. Rates must be strictly increasing.
StressReport stress(const NetworkConfig& net, const PolicySet& policy,
                    const std::vector<std::int64_t>& rate_schedule);

}  // namespace algsim
