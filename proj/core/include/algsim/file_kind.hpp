#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace algsim {

// The two toy container formats carried over the virtual network, stand-ins
// for real office-document and MPEG program streams.
//
//   doc:  ASCII magic "%DOC1\n", then a line "AUTHOR:<name>\n", then free bytes
//   mpeg: binary magic 00 00 01 BA, then free bytes
enum class FileKind { Unknown, Doc, Mpeg };

// Pure function of at most the first 6 payload bytes.
FileKind detect_file_kind(std::string_view bytes);

// Reads the author of a doc container (second line, "AUTHOR:" prefix,
// value trimmed of the trailing newline). Throws DocFormatError when the
// magic or the author line is missing.
std::string extract_author(std::string_view doc_bytes);

std::string_view file_kind_name(FileKind kind);
std::optional<FileKind> file_kind_from_name(std::string_view name);

// The Content-Type token a well-formed request declares for each kind.
std::string_view canonical_content_type(FileKind kind);

// Builds a minimal well-formed body of the given kind.
std::string make_doc_body(std::string_view author, std::string_view content);
std::string make_mpeg_body(std::string_view content);

}  // namespace algsim
