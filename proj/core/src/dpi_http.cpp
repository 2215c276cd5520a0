#include "algsim/dpi_http.hpp"

#include <charconv>

#include "algsim/errors.hpp"

namespace algsim {

namespace {

std::optional<std::int64_t> parse_content_length(const std::string& value) {
  std::int64_t n = 0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, n);
  if (ec != std::errc{} || ptr != last || n < 0) return std::nullopt;
  return n;
}

std::string status_text(int status) {
  switch (status) {
    case 400:
      return "Bad Request";
    case 403:
      return "Forbidden";
    case 415:
      return "Unsupported Media Type";
    default:
      return "Error";
  }
}

}  // namespace

std::optional<NormalizedRequest> normalize(const HttpMessage& request,
                                           HeaderMode mode,
                                           HttpReject* reject) {
  auto fail = [&](int status, std::string reason) -> std::optional<NormalizedRequest> {
    if (reject != nullptr) {
      reject->status = status;
      reject->reason = std::move(reason);
    }
    return std::nullopt;
  };

  const auto lengths = request.header_values("Content-Length");
  const auto types = request.header_values("Content-Type");
  NormalizedRequest out;
  out.message = request;

  if (mode == HeaderMode::Strict) {
    if (lengths.size() > 1) return fail(400, "duplicate content-length");
    if (types.size() > 1) return fail(400, "duplicate content-type");
  } else {
    if (lengths.size() > 1) {
      out.notes.push_back("duplicate-content-length(" +
                          std::to_string(lengths.size()) + ")");
    }
    if (types.size() > 1) {
      out.notes.push_back("duplicate-content-type(" +
                          std::to_string(types.size()) + ")");
    }
  }

  std::int64_t resolved = 0;
  if (!lengths.empty()) {
    const auto parsed = parse_content_length(lengths.back());
    if (!parsed) return fail(400, "malformed content-length");
    resolved = *parsed;
  }
  const auto body_size = static_cast<std::int64_t>(request.body.size());
  if (mode == HeaderMode::Strict) {
    if (body_size != resolved) return fail(400, "content-length mismatch");
  } else {
    if (body_size < resolved) return fail(400, "truncated body");
    if (body_size > resolved) {
      out.surplus = request.body.substr(static_cast<std::size_t>(resolved));
      out.message.body.resize(static_cast<std::size_t>(resolved));
      out.notes.push_back("surplus-bytes(" +
                          std::to_string(body_size - resolved) + ")");
    }
  }

  out.content_length = resolved;
  if (!types.empty()) out.content_type = types.back();

  if (mode == HeaderMode::LastWins) {
    // Rewrite the framing headers so the forwarded message carries exactly
    // the values that were treated as valid.
    auto& headers = out.message.headers;
    bool kept_length = false;
    bool kept_type = false;
    for (auto it = headers.end(); it != headers.begin();) {
      --it;
      if (header_name_equals(it->first, "Content-Length")) {
        if (kept_length) {
          it = headers.erase(it);
          continue;
        }
        kept_length = true;
        it->second = std::to_string(resolved);
      } else if (header_name_equals(it->first, "Content-Type")) {
        if (kept_type) {
          it = headers.erase(it);
          continue;
        }
        kept_type = true;
      }
    }
  }
  return out;
}

RouteDecision route_by_content(const PolicySet& policy,
                               const NormalizedRequest& request,
                               std::uint16_t ingress_port,
                               const IpAddr& src_ip) {
  RouteDecision decision;
  const ContentRoute* route = policy.find_route(ingress_port, src_ip);
  if (route == nullptr) {
    decision.kind = RouteKind::Reject;
    decision.status = 403;
    decision.reason = "no-route-for-port-source";
    return decision;
  }
  const FileKind kind = detect_file_kind(request.message.body);
  if (kind != route->required_kind) {
    decision.kind = RouteKind::Reject;
    decision.status = 415;
    decision.reason = "file-kind-mismatch";
    return decision;
  }
  if (request.content_type !=
      std::string(canonical_content_type(route->required_kind))) {
    decision.kind = RouteKind::Reject;
    decision.status = 415;
    decision.reason = "content-type-mismatch";
    return decision;
  }
  decision.kind = RouteKind::Redirect;
  decision.dest_ip = route->dest_ip;
  decision.dest_port = route->dest_port;
  decision.status = 0;
  return decision;
}

AuthorCheck check_author(const PolicySet& policy,
                         const std::string& doc_body) {
  AuthorCheck check;
  std::string author;
  try {
    author = extract_author(doc_body);
  } catch (const DocFormatError&) {
    check.allowed = false;
    check.reason = "unparseable-document";
    return check;
  }
  check.author = author;
  if (policy.author_whitelist.count(author)) {
    check.allowed = true;
  } else {
    check.allowed = false;
    check.reason = "author-not-whitelisted";
  }
  return check;
}

UrlFilterResult filter_url(const PolicySet& policy,
                           const std::string& target) {
  UrlFilterResult result;
  for (const auto& pattern : policy.url_blocklist) {
    if (policy.url_engine == RegexEngine::Backtracking) {
      const MatchResult m = pattern->search_backtracking(target);
      result.steps += m.steps;
      if (m.matched) {
        result.allowed = false;
        result.matched_pattern = pattern->text();
        return result;
      }
    } else {
      const auto m = pattern->search_budgeted(target, policy.regex_budget);
      if (!m.has_value()) {
        result.steps += policy.regex_budget;
        result.allowed = false;
        result.budget_exhausted = true;
        result.matched_pattern = pattern->text();
        return result;
      }
      result.steps += m->steps;
      if (m->matched) {
        result.allowed = false;
        result.matched_pattern = pattern->text();
        return result;
      }
    }
  }
  return result;
}

HttpMessage make_reject_response(int status, const std::string& reason) {
  HttpMessage response;
  response.kind = HttpKind::Response;
  response.status = status;
  response.reason = status_text(status);
  response.add_header("Content-Length", "0");
  response.add_header("X-Reject-Reason", reason);
  return response;
}

}  // namespace algsim
