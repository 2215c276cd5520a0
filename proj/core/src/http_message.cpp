#include "algsim/http_message.hpp"

#include <cctype>
#include <charconv>

#include "algsim/errors.hpp"

namespace algsim {

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Splits "bytes" into start line, header lines and body. Lines are strict
// CRLF; the header block ends at the first empty line. Everything after the
// blank line is body, untouched.
struct RawMessage {
  std::string_view start_line;
  std::vector<std::pair<std::string_view, std::string_view>> headers;
  std::string_view body;
};

RawMessage split_message(std::string_view bytes) {
  RawMessage raw;
  std::size_t head_end = bytes.find("\r\n\r\n");
  if (head_end == std::string_view::npos)
    throw HttpParseError("missing blank line terminating the header block");
  std::string_view head = bytes.substr(0, head_end);
  raw.body = bytes.substr(head_end + 4);

  std::size_t line_end = head.find("\r\n");
  raw.start_line = line_end == std::string_view::npos ? head : head.substr(0, line_end);
  std::string_view rest =
      line_end == std::string_view::npos ? std::string_view{} : head.substr(line_end + 2);

  while (!rest.empty()) {
    std::size_t eol = rest.find("\r\n");
    std::string_view line = eol == std::string_view::npos ? rest : rest.substr(0, eol);
    rest = eol == std::string_view::npos ? std::string_view{} : rest.substr(eol + 2);

    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw HttpParseError("header line without ':': '" + std::string(line) + "'");
    std::string_view name = line.substr(0, colon);
    if (name.empty()) throw HttpParseError("header line with empty name");
    std::string_view value = line.substr(colon + 1);
    while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
      value.remove_prefix(1);
    raw.headers.emplace_back(name, value);
  }
  return raw;
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t sp = s.find(' ', i);
    if (sp == std::string_view::npos) {
      out.push_back(s.substr(i));
      break;
    }
    out.push_back(s.substr(i, sp - i));
    i = sp + 1;
  }
  return out;
}

}  // namespace

bool header_name_equals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (lower(a[i]) != lower(b[i])) return false;
  return true;
}

std::vector<std::string> HttpMessage::header_values(std::string_view name) const {
  std::vector<std::string> out;
  for (const auto& [n, v] : headers)
    if (header_name_equals(n, name)) out.push_back(v);
  return out;
}

std::optional<std::string> HttpMessage::last_header(std::string_view name) const {
  std::optional<std::string> out;
  for (const auto& [n, v] : headers)
    if (header_name_equals(n, name)) out = v;
  return out;
}

std::size_t HttpMessage::header_count(std::string_view name) const {
  std::size_t k = 0;
  for (const auto& [n, v] : headers)
    if (header_name_equals(n, name)) ++k;
  return k;
}

HttpMessage parse_http_request(std::string_view bytes) {
  RawMessage raw = split_message(bytes);
  auto tokens = split_spaces(raw.start_line);
  if (tokens.size() != 3)
    throw HttpParseError("malformed request line: '" + std::string(raw.start_line) + "'");
  if (tokens[0].empty() || tokens[1].empty())
    throw HttpParseError("malformed request line: '" + std::string(raw.start_line) + "'");
  if (!tokens[2].starts_with("HTTP/"))
    throw HttpParseError("malformed HTTP version: '" + std::string(tokens[2]) + "'");

  HttpMessage msg;
  msg.kind = HttpKind::Request;
  msg.method = std::string(tokens[0]);
  msg.target = std::string(tokens[1]);
  msg.version = std::string(tokens[2]);
  for (const auto& [n, v] : raw.headers) msg.add_header(std::string(n), std::string(v));
  msg.body = std::string(raw.body);
  return msg;
}

HttpMessage parse_http_response(std::string_view bytes) {
  RawMessage raw = split_message(bytes);
  std::string_view line = raw.start_line;
  std::size_t sp1 = line.find(' ');
  if (sp1 == std::string_view::npos || !line.substr(0, sp1).starts_with("HTTP/"))
    throw HttpParseError("malformed status line: '" + std::string(line) + "'");
  std::size_t sp2 = line.find(' ', sp1 + 1);
  std::string_view code = line.substr(sp1 + 1, sp2 == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : sp2 - sp1 - 1);
  int status = 0;
  auto [p, ec] = std::from_chars(code.begin(), code.end(), status);
  if (ec != std::errc() || p != code.end() || code.size() != 3)
    throw HttpParseError("malformed status code: '" + std::string(code) + "'");

  HttpMessage msg;
  msg.kind = HttpKind::Response;
  msg.version = std::string(line.substr(0, sp1));
  msg.status = status;
  msg.reason = sp2 == std::string_view::npos ? "" : std::string(line.substr(sp2 + 1));
  for (const auto& [n, v] : raw.headers) msg.add_header(std::string(n), std::string(v));
  msg.body = std::string(raw.body);
  return msg;
}

std::string serialize_http(const HttpMessage& msg) {
  std::string out;
  if (msg.kind == HttpKind::Request) {
    out += msg.method;
    out += ' ';
    out += msg.target;
    out += ' ';
    out += msg.version;
  } else {
    out += msg.version;
    out += ' ';
    char code[8];
    std::snprintf(code, sizeof(code), "%03d", msg.status);
    out += code;
    out += ' ';
    out += msg.reason;
  }
  out += "\r\n";
  for (const auto& [n, v] : msg.headers) {
    out += n;
    out += ": ";
    out += v;
    out += "\r\n";
  }
  out += "\r\n";
  out += msg.body;
  return out;
}

}  // namespace algsim
