#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"

#include "algsim/dpi_http.hpp"
#include "algsim/file_kind.hpp"
#include "algsim/fuzz.hpp"
#include "algsim/pattern.hpp"
#include "algsim/rng.hpp"
#include "algsim/vtime.hpp"
#include "test_util.hpp"

using namespace algsim;

namespace {

std::size_t longest_a_run(const std::string& bytes) {
  std::size_t best = 0;
  std::size_t run = 0;
  for (char c : bytes) {
    run = (c == 'a') ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

bool same_case(const FuzzHttpCase& a, const FuzzHttpCase& b) {
  return a.ingress_port == b.ingress_port &&
         a.request.method == b.request.method &&
         a.request.target == b.request.target &&
         a.request.headers == b.request.headers &&
         a.request.body == b.request.body;
}

}  // namespace

TEST_CASE("http generation is deterministic and well-framed") {
  FuzzHttpTemplate tmpl;
  auto first = gen_fuzz_http(tmpl, 42, 200);
  auto second = gen_fuzz_http(tmpl, 42, 200);
  REQUIRE(first.size() == 200);
  REQUIRE(second.size() == 200);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(same_case(first[i], second[i]));
  }

  CHECK(gen_fuzz_http(tmpl, 42, 0).empty());
  CHECK_FALSE(same_case(first[0], gen_fuzz_http(tmpl, 43, 1)[0]));

  for (const FuzzHttpCase& item : first) {
    auto declared = item.request.last_header("Content-Length");
    REQUIRE(declared.has_value());
    CHECK(*declared == std::to_string(item.request.body.size()));
    auto types = item.request.header_count("Content-Type");
    CHECK(types >= 1);
    CHECK(types <= 4);
  }
}

TEST_CASE("routing decisions agree with a recomputed oracle on fuzz input") {
  const PolicySet& policy = testu::golden_policy();
  const std::vector<IpAddr> sources = {IpAddr::parse("10.10.10.2"),
                                       IpAddr::parse("10.10.10.3"),
                                       IpAddr::parse("10.10.10.4")};
  FuzzHttpTemplate tmpl;
  auto cases = gen_fuzz_http(tmpl, 7, 1000);
  SplitMix64 rng(7);

  for (const FuzzHttpCase& item : cases) {
    IpAddr src = sources[rng.below(sources.size())];
    HttpReject why;
    auto norm = normalize(item.request, HeaderMode::LastWins, &why);
    REQUIRE(norm.has_value());
    RouteDecision got =
        route_by_content(policy, *norm, item.ingress_port, src);

    const ContentRoute* route = policy.find_route(item.ingress_port, src);
    if (route == nullptr) {
      CHECK(got.kind == RouteKind::Reject);
      CHECK(got.status == 403);
      continue;
    }
    bool kind_ok = detect_file_kind(norm->message.body) ==
                   route->required_kind;
    bool type_ok = norm->content_type ==
                   std::string(canonical_content_type(route->required_kind));
    if (kind_ok && type_ok) {
      CHECK(got.kind == RouteKind::Redirect);
      CHECK(got.dest_ip == route->dest_ip);
      CHECK(got.dest_port == route->dest_port);
    } else {
      CHECK(got.kind == RouteKind::Reject);
      CHECK(got.status == 415);
    }
  }
}

TEST_CASE("generated requests survive a serialize and parse round-trip") {
  FuzzHttpTemplate tmpl;
  auto cases = gen_fuzz_http(tmpl, 0xC0FFEE, 10000);
  REQUIRE(cases.size() == 10000);
  for (const FuzzHttpCase& item : cases) {
    HttpMessage back = parse_http_request(serialize_http(item.request));
    CHECK(back.method == item.request.method);
    CHECK(back.target == item.request.target);
    CHECK(back.headers == item.request.headers);
    CHECK(back.body == item.request.body);
  }
}

TEST_CASE("mutation is deterministic and can expand runs") {
  const std::string seed = "STOR " + std::string(6, 'x') + "\r\n";
  auto first = mutate(seed, 99, 300);
  auto second = mutate(seed, 99, 300);
  CHECK(first == second);
  CHECK(mutate(seed, 99, 0).empty());

  auto empties = mutate("", 1, 3);
  REQUIRE(empties.size() == 3);
  for (const auto& m : empties) CHECK(m.empty());

  bool grew = false;
  for (const auto& m : first) {
    grew = grew || m.size() > seed.size();
  }
  CHECK(grew);
}

TEST_CASE("mutated transfers expose the exponential matcher") {
  const std::string seed = "RETR " + std::string(18, 'a') + "\r\n";
  auto mutants = mutate(seed, 2026, 200);

  // Pick the first mutant that lengthens the run enough to blow past a
  // million steps but stays small enough to measure in one test run.
  std::string victim;
  for (const auto& m : mutants) {
    std::size_t run = longest_a_run(m);
    if (run >= 21 && run <= 24) {
      victim = m;
      break;
    }
  }
  REQUIRE_FALSE(victim.empty());

  Pattern evil = Pattern::compile("(a|a)*b");
  MatchResult slow = evil.search_backtracking(victim);
  CHECK_FALSE(slow.matched);
  CHECK(slow.steps > 1000000);

  auto fast = evil.search_budgeted(victim, 10000);
  REQUIRE(fast.has_value());
  CHECK_FALSE(fast->matched);
  CHECK(fast->steps <=
        static_cast<std::int64_t>(evil.program_size() *
                                  (victim.size() + 1)));
}

TEST_CASE("stress sweeps are integer-exact") {
  NetworkConfig tiny = testu::tiny_network();
  PolicySet open = testu::open_policy();

  SUBCASE("below saturation every request costs exactly the service time") {
    StressReport report = stress(tiny, open, {3000, 6000});
    REQUIRE(report.points.size() == 2);
    for (const StressPoint& point : report.points) {
      CHECK(point.completed == point.rate_per_min);
      CHECK(point.sum_latency_ns == point.completed * 2 * kNsPerMs);
      CHECK(point.mean_latency_ms() == doctest::Approx(2.0));
    }
    CHECK_FALSE(report.knee_rate_per_min.has_value());
  }

  SUBCASE("past saturation the queue grows and the knee is reported") {
    StressReport report = stress(tiny, open, {3000, 40000});
    REQUIRE(report.points.size() == 2);
    const StressPoint& hot = report.points[1];
    CHECK(hot.completed == 40000);
    // Arrivals every 1.5 ms against 2 ms service: the k-th request waits
    // k * 0.5 ms, so the total is 2 ms * n plus 0.5 ms * n(n-1)/2.
    std::int64_t n = 40000;
    std::int64_t expected =
        n * 2 * kNsPerMs + (kNsPerMs / 2) * (n * (n - 1) / 2);
    CHECK(hot.sum_latency_ns == expected);
    REQUIRE(report.knee_rate_per_min.has_value());
    CHECK(*report.knee_rate_per_min == 40000);
  }

  SUBCASE("malformed schedules are rejected") {
    CHECK(stress(tiny, open, {}).points.empty());
    CHECK_THROWS_AS(stress(tiny, open, {0}), std::invalid_argument);
    CHECK_THROWS_AS(stress(tiny, open, {-5}), std::invalid_argument);
    CHECK_THROWS_AS(stress(tiny, open, {100, 100}), std::invalid_argument);
    CHECK_THROWS_AS(stress(tiny, open, {200, 100}), std::invalid_argument);
    CHECK_THROWS_AS(stress(tiny, open, {2000000}), std::invalid_argument);
  }
}
