#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace algsim {

enum class HttpKind { Request, Response };

// One HTTP/1.1 message in the simplified wire form used on the virtual
// network: start line, CRLF-separated headers, blank line, raw body bytes.
// Duplicate headers are preserved verbatim, in order; nothing here
// reconciles Content-Length against the body (that is the inspector's job).
struct HttpMessage {
  HttpKind kind = HttpKind::Request;

  // Request fields.
  std::string method;
  std::string target;
  std::string version = "HTTP/1.1";

  // Response fields.
  int status = 0;
  std::string reason;

  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  // Name comparisons are case-insensitive; stored casing is preserved.
  std::vector<std::string> header_values(std::string_view name) const;
  std::optional<std::string> last_header(std::string_view name) const;
  std::size_t header_count(std::string_view name) const;

  void add_header(std::string name, std::string value) {
    headers.emplace_back(std::move(name), std::move(value));
  }
};

bool header_name_equals(std::string_view a, std::string_view b);

// Throw HttpParseError on malformed input.
HttpMessage parse_http_request(std::string_view bytes);
HttpMessage parse_http_response(std::string_view bytes);

std::string serialize_http(const HttpMessage& msg);

}  // namespace algsim
