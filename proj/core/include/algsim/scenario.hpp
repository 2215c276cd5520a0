#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algsim/fuzz.hpp"
#include "algsim/net_config.hpp"
#include "algsim/netsim.hpp"
#include "algsim/policy.hpp"
#include "algsim/vtime.hpp"

namespace algsim {

enum class Verdict { Enforced, NotEnforced };

const char* verdict_name(Verdict verdict);
std::optional<Verdict> verdict_from_name(std::string_view name);

struct ScenarioSpec {
  std::string id;
  std::string cwe;
  std::string policy_ref;
  std::string attack;
  std::uint64_t seed = 1;
};

struct ScenarioResult {
  std::string id;
  std::string cwe;
  Verdict verdict = Verdict::NotEnforced;
  std::vector<std::string> evidence;
  VirtualTime virtual_duration = 0;
  std::map<std::string, std::int64_t> metrics;
  std::optional<StressReport> stress;
  // Full hop-by-hop trace of the scenario's network, for JSONL export.
  // Empty for the stress scenario, which runs with tracing off.
  std::vector<TraceEntry> trace;
};

// The embedded scenario catalog, S1 through S13. Each entry names the
// weakness class it probes and the policy knob under test; the verdict each
// produces depends on the supplied configuration, not on the catalog.
const std::vector<ScenarioSpec>& scenario_catalog();

// Catalog entry by id, or nullptr when the id is unknown.
const ScenarioSpec* scenario_by_id(std::string_view id);

// Builds a fresh network for the scenario, plays its attack traffic, and
// evaluates the oracle. Throws std::invalid_argument when the configuration
// lacks the actors the scenario needs (for example no unauthorized host to
// spoof from).
ScenarioResult run_scenario(const ScenarioSpec& spec, const NetworkConfig& net,
                            const PolicySet& policy);

// Catalog lookup plus run, with the catalog seed replaced by `seed`.
// Throws UnknownScenarioError for ids outside the catalog.
ScenarioResult run_scenario_by_id(const std::string& id,
                                  const NetworkConfig& net,
                                  const PolicySet& policy, std::uint64_t seed);

// Threshold verdicts for the two performance scenarios, kept as pure
// functions so the cut-off logic is testable without a simulation run.
Verdict throughput_verdict(const StressReport& report,
                           std::int64_t capacity_rpm);
Verdict latency_verdict(VirtualTime latency, std::int64_t max_acceptable_ms);

}  // namespace algsim
