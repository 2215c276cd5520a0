#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algsim/http_message.hpp"
#include "algsim/policy.hpp"

namespace algsim {

struct HttpReject {
  int status = 400;
  std::string reason;
};

// A request after header normalization. `surplus` holds body bytes beyond
// the resolved Content-Length; in LastWins mode the caller re-parses them as
// the start of the next request (the smuggling behavior), in Strict mode a
// surplus never survives normalization.
struct NormalizedRequest {
  HttpMessage message;
  std::int64_t content_length = 0;
  std::string content_type;
  std::vector<std::string> notes;
  std::string surplus;
};

// Resolves duplicate framing headers per the configured mode. Strict rejects
// duplicated Content-Length/Content-Type and any disagreement between
// Content-Length and the actual body size. LastWins takes the last
// occurrence as authoritative, truncates the body to it, and reports the
// remainder in `surplus`.
std::optional<NormalizedRequest> normalize(const HttpMessage& request,
                                           HeaderMode mode,
                                           HttpReject* reject);

enum class RouteKind { Redirect, Reject };

struct RouteDecision {
  RouteKind kind = RouteKind::Reject;
  IpAddr dest_ip;
  std::uint16_t dest_port = 0;
  int status = 403;
  std::string reason;
};

// Matches a content route on (ingress port, source IP), then requires the
// body magic and the declared Content-Type to both agree with the route's
// required kind. No route: 403. Kind or Content-Type mismatch: 415.
RouteDecision route_by_content(const PolicySet& policy,
                               const NormalizedRequest& request,
                               std::uint16_t ingress_port,
                               const IpAddr& src_ip);

struct AuthorCheck {
  bool allowed = false;
  std::string reason;
  std::string author;
};

// Allows a document body only when its AUTHOR field is whitelisted.
AuthorCheck check_author(const PolicySet& policy, const std::string& doc_body);

struct UrlFilterResult {
  bool allowed = true;
  std::string matched_pattern;
  std::int64_t steps = 0;
  bool budget_exhausted = false;
};

// Runs the request target against every blocklist pattern with the
// configured engine, accumulating steps across patterns. A budget-exhausted
// budgeted match counts as a hit (fail closed).
UrlFilterResult filter_url(const PolicySet& policy, const std::string& target);

// The ALG's wire response for an inspector rejection.
HttpMessage make_reject_response(int status, const std::string& reason);

}  // namespace algsim
