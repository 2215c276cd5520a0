#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace algsim {

// One weakness class from the risk-analysis catalog: what it is, the attack
// that probes it, and the products it has occurred in. `implemented` marks
// the entries this testbed actually exercises with a scenario.
struct CweEntry {
  std::string id;
  std::string description;
  std::string attack_scenario;
  std::vector<std::string> occurred_in;
  bool implemented = false;
};

const std::vector<CweEntry>& cwe_catalog();

// Entry for an id like "CWE-290", or nullptr when the id is not cataloged.
const CweEntry* cwe_lookup(std::string_view id);

}  // namespace algsim
