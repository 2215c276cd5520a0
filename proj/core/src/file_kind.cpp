#include "algsim/file_kind.hpp"

#include "algsim/errors.hpp"

namespace algsim {

namespace {
constexpr std::string_view kDocMagic = "%DOC1\n";
// Explicit length: the literal contains embedded NUL bytes.
constexpr std::string_view kMpegMagic{"\x00\x00\x01\xBA", 4};
constexpr std::string_view kAuthorPrefix = "AUTHOR:";
}  // namespace

FileKind detect_file_kind(std::string_view bytes) {
  if (bytes.substr(0, kDocMagic.size()) == kDocMagic) return FileKind::Doc;
  if (bytes.substr(0, kMpegMagic.size()) == kMpegMagic) return FileKind::Mpeg;
  return FileKind::Unknown;
}

std::string extract_author(std::string_view doc_bytes) {
  if (detect_file_kind(doc_bytes) != FileKind::Doc)
    throw DocFormatError("missing doc magic");
  std::string_view rest = doc_bytes.substr(kDocMagic.size());
  if (rest.substr(0, kAuthorPrefix.size()) != kAuthorPrefix)
    throw DocFormatError("missing AUTHOR line");
  rest.remove_prefix(kAuthorPrefix.size());
  std::size_t eol = rest.find('\n');
  return std::string(eol == std::string_view::npos ? rest : rest.substr(0, eol));
}

std::string_view file_kind_name(FileKind kind) {
  switch (kind) {
    case FileKind::Doc: return "doc";
    case FileKind::Mpeg: return "mpeg";
    case FileKind::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<FileKind> file_kind_from_name(std::string_view name) {
  if (name == "doc") return FileKind::Doc;
  if (name == "mpeg") return FileKind::Mpeg;
  if (name == "unknown") return FileKind::Unknown;
  return std::nullopt;
}

std::string_view canonical_content_type(FileKind kind) {
  switch (kind) {
    case FileKind::Doc: return "application/doc";
    case FileKind::Mpeg: return "video/mpeg";
    case FileKind::Unknown: return "application/octet-stream";
  }
  return "application/octet-stream";
}

std::string make_doc_body(std::string_view author, std::string_view content) {
  std::string body(kDocMagic);
  body += kAuthorPrefix;
  body += author;
  body += '\n';
  body += content;
  return body;
}

std::string make_mpeg_body(std::string_view content) {
  std::string body(kMpegMagic);
  body += content;
  return body;
}

}  // namespace algsim
