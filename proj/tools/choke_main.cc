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

// Command-line driver for the CHOKE analysis pipeline.
//
//   choke <command> [--config FILE] [--input FILE...] [--out DIR] [--seed N]
//                   [--metric ID] [--strict|--lenient] [--shared-only]
//
// Exit status: 0 success, 1 data error, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "choke/pipeline.h"

namespace {

void init_logging() {
  auto logger = spdlog::stderr_color_mt("choke");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("CHOKE_LOG_LEVEL")) {
    const std::string level = env;
    if (level == "error") {
      spdlog::set_level(spdlog::level::err);
    } else if (level == "warn") {
      spdlog::set_level(spdlog::level::warn);
    } else if (level == "info") {
      spdlog::set_level(spdlog::level::info);
    } else if (level == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else {
      spdlog::warn("ignoring CHOKE_LOG_LEVEL={}", level);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();

  CLI::App app{"Certainty analysis of hallucinations despite knowledge over "
               "generation logs"};
  std::string command;
  std::string config_path;
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  std::int64_t seed = -1;
  std::string metric;
  bool strict = false;
  bool lenient = false;
  bool shared_only = false;
  unsigned threads = 0;

  app.add_option("command", command,
                 "validate | label | score | threshold | detect | consistency | "
                 "mitigate | report")
      ->required();
  app.add_option("--config", config_path, "flat JSON engine config")
      ->check(CLI::ExistingFile);
  app.add_option("--input", inputs, "JSONL corpus (repeatable)");
  app.add_option("--out", out_dir, "artifact directory");
  app.add_option("--seed", seed, "overrides the config seed")->check(CLI::NonNegativeNumber);
  app.add_option("--metric", metric, "restrict to one metric");
  auto* strict_flag = app.add_flag("--strict", strict, "abort on the first bad line");
  app.add_flag("--lenient", lenient, "skip bad lines")->excludes(strict_flag);
  app.add_flag("--shared-only", shared_only,
               "consistency over hallucinations shared by both settings");
  app.add_option("--threads", threads, "worker threads for permutation tests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto cmd = choke::command_from_string(command);
  if (!cmd) {
    std::cerr << "unknown command '" << command << "'\n" << app.help();
    return 2;
  }

  try {
    choke::PipelineOptions opts;
    opts.command = *cmd;
    if (!config_path.empty()) opts.config = choke::load_config(config_path);
    if (seed >= 0) opts.config.seed = static_cast<std::uint64_t>(seed);
    if (!metric.empty()) opts.config.metrics = {choke::metric_from_string(metric)};
    if (strict) opts.config.parse_mode = choke::ParseMode::kStrict;
    if (lenient) opts.config.parse_mode = choke::ParseMode::kLenient;
    if (threads > 0) opts.config.threads = threads;
    opts.inputs = inputs;
    opts.out_dir = out_dir;
    opts.shared_only = shared_only;
    return choke::run_command(opts);
  } catch (const choke::Error& e) {
    spdlog::error("{}: {}", choke::error_code_name(e.code()), e.what());
    return choke::exit_status_for(e);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
