#include "algsim/ftp_command.hpp"

#include <cctype>

#include "algsim/errors.hpp"

namespace algsim {

FtpCommand parse_ftp_command(std::string_view line) {
  if (line.ends_with("\r\n")) line.remove_suffix(2);
  if (line.empty()) throw FtpParseError("empty command line");

  std::size_t sp = line.find(' ');
  std::string_view verb = sp == std::string_view::npos ? line : line.substr(0, sp);
  if (verb.empty()) throw FtpParseError("missing verb");

  FtpCommand cmd;
  cmd.verb.reserve(verb.size());
  for (char c : verb) {
    if (!std::isalpha(static_cast<unsigned char>(c)))
      throw FtpParseError("verb contains non-letter: '" + std::string(verb) + "'");
    cmd.verb += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  if (sp != std::string_view::npos) cmd.arg = std::string(line.substr(sp + 1));
  return cmd;
}

std::string serialize_ftp_command(const FtpCommand& cmd) {
  std::string out = cmd.verb;
  if (!cmd.arg.empty()) {
    out += ' ';
    out += cmd.arg;
  }
  out += "\r\n";
  return out;
}

}  // namespace algsim
