#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "algsim/ftp_command.hpp"
#include "algsim/policy.hpp"

namespace algsim {

enum class FtpVerdictKind { Allow, Blocked, Malicious, ScanSkipped };

struct FtpVerdict {
  FtpVerdictKind kind = FtpVerdictKind::Allow;
  std::string verb;
  std::string pattern;
  std::int64_t steps = 0;
  bool budget_exhausted = false;
};

// Blocks a command iff its verb is on the blocklist; the argument never
// matters. Data scanning is a separate step.
FtpVerdict filter_command(const PolicySet& policy, const FtpCommand& command);

// Scans transfer data with the configured pattern and engine. With scanning
// off the verdict is ScanSkipped. Budget exhaustion in the budgeted engine
// counts as Malicious (fail closed). `steps` always reports the matcher
// work so the gateway can charge it as service time.
FtpVerdict scan_data(const PolicySet& policy, std::string_view data);

}  // namespace algsim
