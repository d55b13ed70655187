// Copyright 2026 The CHOKE Engine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "choke/csv.h"
#include "choke/error.h"
#include "choke/pipeline.h"
#include "doctest.h"
#include "fixtures.h"

using namespace choke;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(CHOKE_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> jsonl(const fs::path& p) {
  std::vector<json> out;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

fs::path write_corpus(const fs::path& dir, const std::string& setting) {
  const fs::path p = dir / (setting + ".jsonl");
  std::ofstream(p, std::ios::binary) << serialize_records(testing::planted_corpus(setting));
  return p;
}

int run(Command c, const fs::path& out, std::vector<std::string> inputs = {},
        EngineConfig cfg = {}) {
  PipelineOptions o;
  o.command = c;
  o.config = std::move(cfg);
  o.inputs = std::move(inputs);
  o.out_dir = out.string();
  return run_command(o);
}

int cli(const std::string& args, const fs::path& log = {}) {
  std::string cmd = std::string("\"") + CHOKE_CLI + "\" " + args;
  cmd += log.empty() ? " 2>/dev/null" : " 2>\"" + log.string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void full_pipeline(const fs::path& out, const std::vector<std::string>& inputs,
                   const EngineConfig& cfg) {
  for (Command c : {Command::kValidate, Command::kLabel, Command::kScore,
                    Command::kThreshold, Command::kDetect, Command::kConsistency,
                    Command::kMitigate, Command::kReport}) {
    CAPTURE(command_name(c));
    REQUIRE(run(c, out, inputs, cfg) == 0);
  }
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return files;
}

}  // namespace

TEST_CASE("command names") {
  for (const char* n : {"validate", "label", "score", "threshold", "detect", "consistency",
                        "mitigate", "report"}) {
    REQUIRE(command_from_string(n));
    CHECK(std::string(command_name(*command_from_string(n))) == n);
  }
  CHECK_FALSE(command_from_string("plot"));
}

TEST_CASE("label writes one outcome per record") {
  const auto dir = scratch("label");
  const auto input = write_corpus(dir, "child");
  REQUIRE(run(Command::kLabel, dir, {input.string()}) == 0);
  const auto lines = jsonl(dir / artifact::kLabels);
  CHECK(lines.size() == 100);
  std::map<std::string, int> counts;
  for (const auto& l : lines) {
    ++counts[l.at("reason").is_null() ? l.at("outcome").get<std::string>()
                                      : l.at("reason").get<std::string>()];
    CHECK(l.contains("config_hash"));
    CHECK(l.contains("seed"));
  }
  CHECK(counts["no_knowledge"] == 40);
  CHECK(counts["factual"] == 40);
  CHECK(counts["hallucination"] == 20);
}

TEST_CASE("stages refuse to run before their inputs exist") {
  const auto dir = scratch("order");
  try {
    run(Command::kDetect, dir);
    FAIL("expected upstream-artifact-missing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUpstreamArtifactMissing);
    CHECK(exit_status_for(e) == 1);
  }
  try {
    run(Command::kLabel, dir);
    FAIL("expected missing-input");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingInput);
  }
}

TEST_CASE("validate reports issues and exits 1 on a broken corpus") {
  const auto dir = scratch("validate");
  auto records = testing::planted_corpus();
  records[3].setting_greedy.text += "!";
  const fs::path p = dir / "bad.jsonl";
  std::ofstream(p, std::ios::binary) << serialize_records(records) << "{oops\n";
  CHECK(run(Command::kValidate, dir, {p.string()}) == 1);
  const json v = json::parse(slurp(dir / artifact::kValidation));
  CHECK(v.at("total_issues") == 2);
  CHECK(v.at("files")[0].at("unparsed_lines")[0].at("line") == 101);
}

TEST_CASE("full pipeline on the planted corpus") {
  const auto dir = scratch("full");
  const auto child = write_corpus(dir, "child");
  const auto alice = write_corpus(dir, "alice_bob");
  EngineConfig cfg;
  cfg.n_permutations = 2000;
  cfg.seed = 3;
  full_pipeline(dir / "out", {child.string(), alice.string()}, cfg);

  const json report = json::parse(slurp(dir / "out" / artifact::kReport));
  CHECK(report.at("summary").at("records") == 200);
  CHECK(report.at("summary").at("hallucination") == 40);
  CHECK(report.at("summary").at("factual") == 80);
  CHECK(report.at("summary").at("excluded_no_knowledge") == 80);
  CHECK(report.at("config_hash") == config_hash(cfg));
  CHECK(report.at("seed") == 3);
  REQUIRE(report.at("groups").size() == 2);
  for (const auto& g : report.at("groups")) {
    CHECK(g.at("outcomes").at("hallucination") == 20);
    for (const auto& m : g.at("metrics")) {
      CAPTURE(m.dump());
      if (m.at("metric") == "probability") {
        CHECK(m.at("choke_fraction") == 40.0);
        CHECK(m.at("n_choke") == 8);
      }
      if (m.at("status") == "ok") CHECK(m.at("cdf_monotone") == true);
    }
  }

  // Same corpus in both settings: CHOKE sets coincide.
  const json cons = json::parse(slurp(dir / "out" / artifact::kConsistency));
  bool saw_probability = false;
  for (const auto& c : cons.at("comparisons")) {
    if (c.at("metric") != "probability") continue;
    saw_probability = true;
    CHECK(c.at("jaccard_percent") == 100.0);
    CHECK(c.at("p_value").get<double>() < 0.01);
  }
  CHECK(saw_probability);

  const auto mit = parse_csv(slurp(dir / "out" / artifact::kMitigation));
  REQUIRE(mit.size() == 7);
  CHECK(mit[0] == std::vector<std::string>{"model", "method", "t_star", "unmitigated_percent",
                                           "dataset_id", "setting_id"});
  CHECK(slurp(dir / "out" / artifact::kMitigation).starts_with("# config_hash="));

  for (const auto& e : fs::directory_iterator(dir / "out" / artifact::kCdfDir)) {
    const auto rows = parse_csv(slurp(e.path()));
    CHECK(rows[0] == std::vector<std::string>{"certainty_level", "cum_frac_hallucination",
                                              "cum_frac_factual"});
  }
}

TEST_CASE("reruns are byte-identical") {
  const auto dir = scratch("rerun");
  const auto child = write_corpus(dir, "child");
  const auto alice = write_corpus(dir, "alice_bob");
  EngineConfig cfg;
  cfg.n_permutations = 500;
  cfg.seed = 17;
  full_pipeline(dir / "a", {child.string(), alice.string()}, cfg);
  cfg.threads = 4;
  full_pipeline(dir / "b", {child.string(), alice.string()}, cfg);
  const auto a = snapshot(dir / "a");
  const auto b = snapshot(dir / "b");
  CHECK(a.size() == b.size());
  CHECK(a.size() >= 15);
  for (const auto& [name, content] : a) {
    CAPTURE(name);
    REQUIRE(b.count(name) == 1);
    CHECK(b.at(name) == content);
  }
}

TEST_CASE("stale artifacts from another config are not silently reused") {
  const auto dir = scratch("stale");
  const auto child = write_corpus(dir, "child");
  EngineConfig a;
  REQUIRE(run(Command::kLabel, dir, {child.string()}, a) == 0);
  REQUIRE(run(Command::kScore, dir, {child.string()}, a) == 0);
  EngineConfig b;
  b.seed = 99;
  // Mismatched hashes are logged; the stage still runs on what it finds.
  CHECK(run(Command::kThreshold, dir, {}, b) == 0);
}

TEST_CASE("command-line exit codes") {
  const auto dir = scratch("cli");
  const auto input = write_corpus(dir, "child");
  const auto log = dir / "stderr.txt";
  CHECK(cli("detect --out \"" + dir.string() + "/out\"", log) == 1);
  CHECK(slurp(log).find("upstream-artifact-missing") != std::string::npos);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("label --strict --lenient") == 2);
  CHECK(cli("label --config /nonexistent/cfg.json") == 2);
  CHECK(cli("label --out \"" + dir.string() + "/out\"") == 1);
  CHECK(cli("label --input \"" + input.string() + "\" --out \"" + dir.string() + "/out\"") == 0);
  CHECK(jsonl(dir / "out" / artifact::kLabels).size() == 100);

  std::ofstream(dir / "bad.json") << R"({"n_permutations": 0})";
  CHECK(cli("label --config \"" + (dir / "bad.json").string() + "\" --input \"" +
            input.string() + "\" --out \"" + dir.string() + "/out\"") == 2);
}

TEST_CASE("command line runs the whole chain") {
  const auto dir = scratch("cli_chain");
  const auto input = write_corpus(dir, "child");
  const std::string out = " --out \"" + (dir / "out").string() + "\"";
  const std::string in = " --input \"" + input.string() + "\"";
  CHECK(cli("validate" + in + out) == 0);
  CHECK(cli("label" + in + out) == 0);
  CHECK(cli("score" + in + out) == 0);
  CHECK(cli("threshold --metric probability --seed 4" + out) == 0);
  CHECK(cli("detect --metric probability --seed 4" + out) == 0);
  CHECK(cli("report --metric probability --seed 4" + out) == 0);
  const json report = json::parse(slurp(dir / "out" / artifact::kReport));
  CHECK(report.at("seed") == 4);
  CHECK(report.at("groups")[0].at("metrics")[0].at("choke_fraction") == 40.0);
}
