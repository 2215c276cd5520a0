#pragma once

#include <string>
#include <string_view>

namespace algsim {

// One FTP control line. The verb is canonicalized to uppercase; the argument
// is everything after the first space, verbatim (it may itself contain
// spaces, or be empty).
struct FtpCommand {
  std::string verb;
  std::string arg;

  bool operator==(const FtpCommand&) const = default;
};

// Parses a control line with or without its trailing CRLF. Throws
// FtpParseError on an empty line or a verb containing non-letters.
FtpCommand parse_ftp_command(std::string_view line);

// Renders "VERB arg\r\n" ("VERB\r\n" when the argument is empty).
std::string serialize_ftp_command(const FtpCommand& cmd);

}  // namespace algsim
