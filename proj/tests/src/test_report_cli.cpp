#include <sys/wait.h>
#include <unistd.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "algsim/report.hpp"
#include "algsim/scenario.hpp"
#include "test_util.hpp"

using namespace algsim;
namespace fs = std::filesystem;

namespace {

// Re-rolled FNV-1a so a broken hash in the library cannot hide.
std::uint64_t mirror_fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() /
                 ("algsim-test-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

struct CliRun {
  int exit_code = -1;
  std::string output;
};

CliRun run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out_file = scratch_dir() / ("cli-out-" +
                                       std::to_string(counter++) + ".txt");
  std::string cmd = std::string(ALGSIM_CLI_PATH) + " " + args + " > " +
                    out_file.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  CliRun run;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  run.output = testu::read_file(out_file.string());
  return run;
}

std::string golden_args() {
  return "run --network " + testu::config_path("net_paper.json") +
         " --policy " + testu::config_path("policy_paper.json");
}

ScenarioResult fake_result(const std::string& id, Verdict verdict) {
  ScenarioResult res;
  res.id = id;
  res.cwe = "CWE-290";
  res.verdict = verdict;
  res.evidence.push_back("synthetic evidence for " + id);
  res.metrics["delivered"] = verdict == Verdict::NotEnforced ? 1 : 0;
  res.virtual_duration = 1'500'000;
  return res;
}

void check_result_shape(const nlohmann::json& row) {
  const std::set<std::string> required = {"id",       "cwe",
                                          "verdict",  "evidence",
                                          "metrics",  "virtual_duration_ms"};
  std::set<std::string> keys;
  for (auto it = row.begin(); it != row.end(); ++it) keys.insert(it.key());
  for (const auto& key : required) {
    REQUIRE_MESSAGE(keys.count(key) == 1, ("missing key " + key));
  }
  for (const auto& key : keys) {
    CHECK_MESSAGE((required.count(key) || key == "stress"),
                  ("unexpected key " + key));
  }
  CHECK(row["id"].is_string());
  CHECK(row["cwe"].is_string());
  std::string verdict = row["verdict"].get<std::string>();
  CHECK((verdict == "Enforced" || verdict == "Not Enforced"));
  CHECK(row["evidence"].is_array());
  for (const auto& item : row["evidence"]) CHECK(item.is_string());
  CHECK(row["metrics"].is_object());
  for (const auto& value : row["metrics"]) CHECK(value.is_number_integer());
  CHECK(row["virtual_duration_ms"].is_number());
  if (keys.count("stress")) {
    const auto& stress = row["stress"];
    REQUIRE(stress.contains("points"));
    REQUIRE(stress.contains("knee_rate_per_min"));
    CHECK((stress["knee_rate_per_min"].is_null() ||
           stress["knee_rate_per_min"].is_number_integer()));
    for (const auto& point : stress["points"]) {
      CHECK(point.contains("rate_per_min"));
      CHECK(point.contains("completed"));
      CHECK(point.contains("sum_latency_ns"));
      CHECK(point.contains("mean_latency_ms"));
    }
  }
}

void check_report_shape(const nlohmann::json& doc) {
  REQUIRE(doc.is_object());
  std::set<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.insert(it.key());
  CHECK(keys == std::set<std::string>{"schema_version", "config_digest",
                                      "seed", "results", "cwe_catalog"});
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["config_digest"].is_string());
  CHECK(doc["seed"].is_number_integer());
  REQUIRE(doc["results"].is_array());
  for (const auto& row : doc["results"]) check_result_shape(row);
  REQUIRE(doc["cwe_catalog"].is_array());
  std::set<std::string> referenced;
  for (const auto& row : doc["results"]) {
    referenced.insert(row["cwe"].get<std::string>());
  }
  std::set<std::string> cataloged;
  for (const auto& entry : doc["cwe_catalog"]) {
    REQUIRE(entry.contains("id"));
    CHECK(entry.contains("description"));
    CHECK(entry.contains("attack_scenario"));
    CHECK(entry.contains("occurred_in"));
    CHECK(entry.contains("implemented"));
    cataloged.insert(entry["id"].get<std::string>());
  }
  CHECK(cataloged == referenced);
}

}  // namespace

TEST_CASE("config digests pin the exact bytes of both documents") {
  const std::string& policy = testu::golden_policy_bytes();
  const std::string& network = testu::golden_network_bytes();
  std::string digest = config_digest(policy, network);

  REQUIRE(digest.size() == 8 + 16);
  CHECK(digest.rfind("fnv1a64:", 0) == 0);

  char expect[17];
  std::snprintf(expect, sizeof(expect), "%016llx",
                static_cast<unsigned long long>(
                    mirror_fnv1a64(policy + "\n" + network)));
  CHECK(digest.substr(8) == expect);

  CHECK(config_digest(policy + " ", network) != digest);
  CHECK(config_digest(policy, network) == digest);
}

TEST_CASE("reports render canonically") {
  std::vector<ScenarioResult> shuffled = {
      fake_result("S10", Verdict::NotEnforced),
      fake_result("S2", Verdict::Enforced),
      fake_result("S1", Verdict::Enforced),
  };
  std::string digest = config_digest("p", "n");
  std::string text = render_report(shuffled, digest, 7);

  SUBCASE("results are ordered by scenario number") {
    nlohmann::json doc = nlohmann::json::parse(text);
    std::vector<std::string> ids;
    for (const auto& row : doc["results"]) {
      ids.push_back(row["id"].get<std::string>());
    }
    CHECK(ids == std::vector<std::string>{"S1", "S2", "S10"});
  }

  SUBCASE("rendering twice yields identical bytes") {
    CHECK(text == render_report(shuffled, digest, 7));
  }

  SUBCASE("the document ends with exactly one newline") {
    REQUIRE_FALSE(text.empty());
    CHECK(text.back() == '\n');
    CHECK(text[text.size() - 2] != '\n');
  }

  SUBCASE("an empty run still renders a valid document") {
    std::string empty = render_report({}, digest, 7);
    nlohmann::json doc = nlohmann::json::parse(empty);
    check_report_shape(doc);
    CHECK(doc["results"].empty());
    CHECK(doc["cwe_catalog"].empty());
  }
}

TEST_CASE("a real report passes the shape check end to end") {
  std::vector<ScenarioResult> results;
  results.push_back(run_scenario_by_id("S12", testu::golden_network(),
                                       testu::golden_policy(), 1));
  results.push_back(run_scenario_by_id("S2", testu::golden_network(),
                                       testu::golden_policy(), 1));
  std::string text = render_report(
      results,
      config_digest(testu::golden_policy_bytes(),
                    testu::golden_network_bytes()),
      1);
  nlohmann::json doc = nlohmann::json::parse(text);
  check_report_shape(doc);
  REQUIRE(doc["results"].size() == 2);
  CHECK(doc["results"][0]["id"] == "S2");
  CHECK(doc["results"][1]["id"] == "S12");
  CHECK(doc["results"][1].contains("stress"));
}

TEST_CASE("the cli honors its exit code contract") {
  SUBCASE("all verdicts matching the expectation file exits zero") {
    CliRun run = run_cli(golden_args() + " --expect " +
                         testu::config_path("table3_expected.json"));
    CHECK(run.exit_code == 0);
  }

  SUBCASE("a verdict mismatch exits one and names the scenario") {
    CliRun run = run_cli(golden_args() + " --expect " +
                         testu::config_path("mitigated_expected.json"));
    CHECK(run.exit_code == 1);
    CHECK(run.output.find("MISMATCH") != std::string::npos);
  }

  SUBCASE("usage and configuration problems exit two") {
    CHECK(run_cli("run --network /nonexistent.json --policy " +
                  testu::config_path("policy_paper.json"))
              .exit_code == 2);
    CHECK(run_cli(golden_args() + " --scenarios S99").exit_code == 2);
    CHECK(run_cli("run --policy " + testu::config_path("policy_paper.json"))
              .exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
  }

  SUBCASE("help exits zero") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("run --help").exit_code == 0);
  }
}

TEST_CASE("the cli writes selected scenarios and byte-stable artifacts") {
  fs::path r1 = scratch_dir() / "report1.json";
  fs::path r2 = scratch_dir() / "report2.json";
  fs::path t1 = scratch_dir() / "trace1.jsonl";
  fs::path t2 = scratch_dir() / "trace2.jsonl";

  std::string select = " --scenarios S2,S4 --seed 9";
  CliRun one = run_cli(golden_args() + select + " --report " + r1.string() +
                       " --trace " + t1.string());
  CliRun two = run_cli(golden_args() + select + " --report " + r2.string() +
                       " --trace " + t2.string());
  REQUIRE(one.exit_code == 0);
  REQUIRE(two.exit_code == 0);

  std::string report_bytes = testu::read_file(r1.string());
  CHECK(report_bytes == testu::read_file(r2.string()));
  std::string trace_bytes = testu::read_file(t1.string());
  CHECK(trace_bytes == testu::read_file(t2.string()));

  nlohmann::json doc = nlohmann::json::parse(report_bytes);
  check_report_shape(doc);
  REQUIRE(doc["results"].size() == 2);
  CHECK(doc["results"][0]["id"] == "S2");
  CHECK(doc["results"][1]["id"] == "S4");
  CHECK(doc["seed"] == 9);

  REQUIRE_FALSE(trace_bytes.empty());
  std::istringstream lines(trace_bytes);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    ++count;
    nlohmann::json row = nlohmann::json::parse(line);
    std::set<std::string> keys;
    for (auto it = row.begin(); it != row.end(); ++it) keys.insert(it.key());
    CHECK(keys == std::set<std::string>{"time", "frame_id", "node", "action",
                                        "detail"});
  }
  CHECK(count > 0);
}
