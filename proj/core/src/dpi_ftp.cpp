#include "algsim/dpi_ftp.hpp"

namespace algsim {

FtpVerdict filter_command(const PolicySet& policy,
                          const FtpCommand& command) {
  FtpVerdict verdict;
  verdict.verb = command.verb;
  if (policy.ftp_blocked_verbs.count(command.verb)) {
    verdict.kind = FtpVerdictKind::Blocked;
  } else {
    verdict.kind = FtpVerdictKind::Allow;
  }
  return verdict;
}

FtpVerdict scan_data(const PolicySet& policy, std::string_view data) {
  FtpVerdict verdict;
  if (policy.ftp_scan.mode == FtpScanMode::Off) {
    verdict.kind = FtpVerdictKind::ScanSkipped;
    return verdict;
  }
  const Pattern& pattern = *policy.ftp_scan.pattern;
  verdict.pattern = pattern.text();
  if (policy.ftp_scan.engine == RegexEngine::Backtracking) {
    const MatchResult m = pattern.search_backtracking(data);
    verdict.steps = m.steps;
    verdict.kind = m.matched ? FtpVerdictKind::Malicious : FtpVerdictKind::Allow;
    return verdict;
  }
  const auto m = pattern.search_budgeted(data, policy.regex_budget);
  if (!m.has_value()) {
    verdict.steps = policy.regex_budget;
    verdict.budget_exhausted = true;
    verdict.kind = FtpVerdictKind::Malicious;
    return verdict;
  }
  verdict.steps = m->steps;
  verdict.kind = m->matched ? FtpVerdictKind::Malicious : FtpVerdictKind::Allow;
  return verdict;
}

}  // namespace algsim
