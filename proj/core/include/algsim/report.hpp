#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "algsim/scenario.hpp"

namespace algsim {

// "fnv1a64:<16 hex digits>" over the policy bytes, a newline, and the
// network bytes, so a report pins the exact configuration that produced it.
std::string config_digest(std::string_view policy_bytes,
                          std::string_view network_bytes);

// Canonical JSON: keys sorted, two-space indent, LF line ends, one trailing
// newline, results ordered numerically by scenario id, and a catalog
// cross-reference for every weakness id the results mention. Contains no
// wall-clock data, so identical runs render byte-identical reports.
std::string render_report(const std::vector<ScenarioResult>& results,
                          const std::string& digest, std::uint64_t seed);

}  // namespace algsim
