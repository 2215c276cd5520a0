#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "algsim/errors.hpp"
#include "algsim/net_config.hpp"
#include "algsim/netsim.hpp"
#include "algsim/policy.hpp"
#include "algsim/report.hpp"
#include "algsim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictMismatch = 1;
constexpr int kExitConfigError = 2;

bool slurp(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return false;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  *out = buf.str();
  return true;
}

bool spill(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return false;
  }
  out << bytes;
  return out.good();
}

std::vector<std::string> split_ids(const std::string& list) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(list);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

int run_command(const std::string& network_path, const std::string& policy_path,
                const std::string& scenarios, std::uint64_t seed,
                const std::string& report_path, const std::string& expect_path,
                const std::string& trace_path) {
  std::string network_bytes;
  std::string policy_bytes;
  if (!slurp(network_path, &network_bytes)) {
    std::cerr << "error: cannot read network config " << network_path << "\n";
    return kExitConfigError;
  }
  if (!slurp(policy_path, &policy_bytes)) {
    std::cerr << "error: cannot read policy " << policy_path << "\n";
    return kExitConfigError;
  }

  algsim::NetworkConfig net;
  algsim::PolicySet policy;
  try {
    net = algsim::load_network_config(network_bytes);
    policy = algsim::load_policy(policy_bytes);
  } catch (const algsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::vector<std::string> ids;
  if (scenarios == "all") {
    for (const algsim::ScenarioSpec& spec : algsim::scenario_catalog()) {
      ids.push_back(spec.id);
    }
  } else {
    ids = split_ids(scenarios);
    if (ids.empty()) {
      std::cerr << "error: --scenarios selected nothing\n";
      return kExitConfigError;
    }
    for (const std::string& id : ids) {
      if (algsim::scenario_by_id(id) == nullptr) {
        std::cerr << "error: unknown scenario " << id << "\n";
        return kExitConfigError;
      }
    }
  }

  std::vector<algsim::ScenarioResult> results;
  try {
    for (const std::string& id : ids) {
      results.push_back(algsim::run_scenario_by_id(id, net, policy, seed));
    }
  } catch (const algsim::SimOverrunError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  for (const algsim::ScenarioResult& result : results) {
    std::printf("%-4s %-13s %s\n", result.id.c_str(),
                algsim::verdict_name(result.verdict), result.cwe.c_str());
  }

  std::string digest = algsim::config_digest(policy_bytes, network_bytes);
  std::string report = algsim::render_report(results, digest, seed);
  if (!report_path.empty() && !spill(report_path, report)) {
    std::cerr << "error: cannot write report " << report_path << "\n";
    return kExitConfigError;
  }

  if (!trace_path.empty()) {
    std::ostringstream trace;
    for (const algsim::ScenarioResult& result : results) {
      algsim::write_trace_jsonl(result.trace, trace);
    }
    if (!spill(trace_path, trace.str())) {
      std::cerr << "error: cannot write trace " << trace_path << "\n";
      return kExitConfigError;
    }
  }

  if (!expect_path.empty()) {
    std::string expect_bytes;
    if (!slurp(expect_path, &expect_bytes)) {
      std::cerr << "error: cannot read expectations " << expect_path << "\n";
      return kExitConfigError;
    }
    nlohmann::json expected = nlohmann::json::parse(expect_bytes, nullptr,
                                                    false);
    if (expected.is_discarded() || !expected.is_object()) {
      std::cerr << "error: expectations file is not a JSON object\n";
      return kExitConfigError;
    }
    int mismatches = 0;
    for (const algsim::ScenarioResult& result : results) {
      auto it = expected.find(result.id);
      if (it == expected.end() || !it->is_string()) {
        std::cerr << "error: expectations file lacks a verdict for "
                  << result.id << "\n";
        return kExitConfigError;
      }
      std::string want = it->get<std::string>();
      if (!algsim::verdict_from_name(want)) {
        std::cerr << "error: expectations file has an invalid verdict '"
                  << want << "' for " << result.id << "\n";
        return kExitConfigError;
      }
      if (want != algsim::verdict_name(result.verdict)) {
        std::printf("MISMATCH %s: got %s, expected %s\n", result.id.c_str(),
                    algsim::verdict_name(result.verdict), want.c_str());
        ++mismatches;
      }
    }
    if (mismatches > 0) {
      return kExitVerdictMismatch;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic gateway security testbed"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand(
      "run", "run attack scenarios against a network and policy");
  std::string network_path;
  std::string policy_path;
  std::string scenarios = "all";
  std::uint64_t seed = 1;
  std::string report_path;
  std::string expect_path;
  std::string trace_path;
  run->add_option("--network", network_path, "network config JSON")
      ->required();
  run->add_option("--policy", policy_path, "policy JSON")->required();
  run->add_option("--scenarios", scenarios,
                  "comma-separated scenario ids, or 'all'");
  run->add_option("--seed", seed, "PRNG seed for generated traffic");
  run->add_option("--report", report_path, "write the JSON report here");
  run->add_option("--expect", expect_path,
                  "JSON object of expected verdicts to compare against");
  run->add_option("--trace", trace_path,
                  "write the hop-by-hop JSONL trace here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  return run_command(network_path, policy_path, scenarios, seed, report_path,
                     expect_path, trace_path);
}
