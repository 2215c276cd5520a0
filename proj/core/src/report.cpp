#include "algsim/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "algsim/cwe_catalog.hpp"
#include "algsim/rng.hpp"

#include "json.hpp"

namespace algsim {
namespace {

using nlohmann::json;

long scenario_number(const std::string& id) {
  if (id.size() < 2 || id[0] != 'S') return 0;
  long value = 0;
  for (std::size_t i = 1; i < id.size(); ++i) {
    if (id[i] < '0' || id[i] > '9') return 0;
    value = value * 10 + (id[i] - '0');
  }
  return value;
}

json result_to_json(const ScenarioResult& result) {
  json out;
  out["id"] = result.id;
  out["cwe"] = result.cwe;
  out["verdict"] = verdict_name(result.verdict);
  out["evidence"] = result.evidence;
  out["virtual_duration_ms"] = vt_to_ms(result.virtual_duration);
  json metrics = json::object();
  for (const auto& [key, value] : result.metrics) {
    metrics[key] = value;
  }
  out["metrics"] = metrics;
  if (result.stress) {
    json points = json::array();
    for (const StressPoint& point : result.stress->points) {
      points.push_back({{"rate_per_min", point.rate_per_min},
                        {"completed", point.completed},
                        {"sum_latency_ns", point.sum_latency_ns},
                        {"mean_latency_ms", point.mean_latency_ms()}});
    }
    json stress;
    stress["points"] = points;
    if (result.stress->knee_rate_per_min) {
      stress["knee_rate_per_min"] = *result.stress->knee_rate_per_min;
    } else {
      stress["knee_rate_per_min"] = nullptr;
    }
    out["stress"] = stress;
  }
  return out;
}

}  // namespace

std::string config_digest(std::string_view policy_bytes,
                          std::string_view network_bytes) {
  std::string combined;
  combined.reserve(policy_bytes.size() + network_bytes.size() + 1);
  combined.append(policy_bytes);
  combined += '\n';
  combined.append(network_bytes);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(combined)));
  return std::string("fnv1a64:") + buf;
}

std::string render_report(const std::vector<ScenarioResult>& results,
                          const std::string& digest, std::uint64_t seed) {
  std::vector<const ScenarioResult*> ordered;
  ordered.reserve(results.size());
  for (const ScenarioResult& result : results) {
    ordered.push_back(&result);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ScenarioResult* a, const ScenarioResult* b) {
                     return scenario_number(a->id) < scenario_number(b->id);
                   });

  json root;
  root["schema_version"] = 1;
  root["config_digest"] = digest;
  root["seed"] = seed;
  json items = json::array();
  std::set<std::string> referenced;
  for (const ScenarioResult* result : ordered) {
    items.push_back(result_to_json(*result));
    referenced.insert(result->cwe);
  }
  root["results"] = items;

  json catalog = json::array();
  for (const CweEntry& entry : cwe_catalog()) {
    if (!referenced.count(entry.id)) continue;
    catalog.push_back({{"id", entry.id},
                       {"description", entry.description},
                       {"attack_scenario", entry.attack_scenario},
                       {"occurred_in", entry.occurred_in},
                       {"implemented", entry.implemented}});
  }
  root["cwe_catalog"] = catalog;

  return root.dump(2) + "\n";
}

}  // namespace algsim
