// Copyright 2026 The stolab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, trace, demo-inconsistency, golden.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stolab/error.hpp"
#include "stolab/harness.hpp"

namespace {

using namespace stolab;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::istringstream in(read_file(path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// Config file plus one --<key> override per setting.
struct ConfigOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    for (const auto& key : harness::config_keys()) {
      app->add_option("--" + key.key, overrides[key.key], key.help)->group("Settings [" + key.section + "]");
    }
  }

  harness::HarnessConfig load() const {
    harness::HarnessConfig config;
    if (!config_path.empty()) config = harness::parse_config(read_file(config_path));
    // Overrides go in declaration order so later keys never depend on earlier ones.
    for (const auto& key : harness::config_keys()) {
      const auto it = overrides.find(key.key);
      if (it != overrides.end() && !it->second.empty()) harness::apply_setting(config, key.key, it->second);
    }
    return config;
  }
};

int cmd_run(const ConfigOptions& opts) {
  const auto config = opts.load();
  const auto cells = harness::run_matrix(config.build_workloads(), config.scenarios, config.matrix);
  std::cout << harness::render_report(cells, config.format);
  return 0;
}

int cmd_trace(const ConfigOptions& opts) {
  const auto config = opts.load();
  const auto cells = harness::run_matrix(config.build_workloads(), config.scenarios, config.matrix);
  std::cout << harness::render_trace(cells);
  return 0;
}

int cmd_demo(const ConfigOptions& opts) {
  auto config = opts.load();
  if (config.consistency.create_listing_lag == 0) {
    std::cerr << "note: create_listing_lag is 0, so every connector should come out complete\n";
  }
  const auto verdicts = harness::run_hazard_demo(config.consistency, config.parts, config.part_size);
  std::cout << "create_listing_lag=" << config.consistency.create_listing_lag << " parts=" << config.parts << "\n";
  for (const auto& v : verdicts) {
    std::cout << v.label << ": _SUCCESS=" << (v.wrote_success ? "yes" : "no") << " readable=" << v.parts_readable
              << "/" << v.expected_parts << " " << (v.complete ? "complete" : "INCOMPLETE")
              << " after_settling=" << v.settled_readable << "/" << v.expected_parts << "\n";
  }
  return 0;
}

struct GoldenCase {
  std::string file;
  std::vector<std::string> lines;
};

std::vector<GoldenCase> golden_cases() {
  harness::MatrixOptions options;
  std::vector<GoldenCase> out;

  const auto single = harness::run_cell(harness::Workload::single_task(), harness::Scenario::kStocator, options);
  out.push_back({"single_task.txt", harness::all_event_lines(single.run.trace)});

  auto three = harness::Workload::three_task();
  three.literal_task_numbers = true;
  const auto cell = harness::run_cell(three, harness::Scenario::kStocator, options);
  out.push_back({"three_task.txt", harness::object_write_lines(cell.run.trace, harness::output_path(three))});
  return out;
}

int cmd_golden(const std::string& dir, bool update) {
  int failures = 0;
  for (const auto& gc : golden_cases()) {
    const std::string path = dir + "/" + gc.file;
    if (update) {
      std::ofstream out(path, std::ios::binary);
      for (const auto& line : gc.lines) out << line << "\n";
      std::cout << "wrote " << path << "\n";
      continue;
    }
    const auto expected = read_lines(path);
    if (expected == gc.lines) {
      std::cout << "ok   " << gc.file << " (" << gc.lines.size() << " lines)\n";
      continue;
    }
    ++failures;
    std::cout << "FAIL " << gc.file << "\n";
    const std::size_t n = std::max(expected.size(), gc.lines.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::string want = i < expected.size() ? expected[i] : "<none>";
      const std::string got = i < gc.lines.size() ? gc.lines[i] : "<none>";
      if (want != got) std::cout << "  line " << i + 1 << ": expected '" << want << "' got '" << got << "'\n";
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stolab: object-store connector lab"};
  app.require_subcommand(1);

  ConfigOptions run_opts, trace_opts, demo_opts;
  auto* run = app.add_subcommand("run", "Run the scenario x workload matrix and print a report");
  run_opts.attach(run);
  auto* trace = app.add_subcommand("trace", "Run the matrix and print every store event as JSONL");
  trace_opts.attach(trace);
  auto* demo = app.add_subcommand("demo-inconsistency", "Show which connectors lose parts under listing lag");
  demo_opts.attach(demo);

  std::string golden_dir = "golden";
  bool golden_update = false;
  auto* golden = app.add_subcommand("golden", "Compare reference traces with the files in --dir");
  golden->add_option("--dir", golden_dir, "directory holding the golden files");
  golden->add_flag("--update", golden_update, "rewrite the golden files instead of comparing");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts);
    if (*trace) return cmd_trace(trace_opts);
    if (*demo) return cmd_demo(demo_opts);
    if (*golden) return cmd_golden(golden_dir, golden_update);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return 2;
  }
  return 0;
}
