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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stolab/engine.hpp"
#include "stolab/legacy.hpp"
#include "stolab/stocator.hpp"
#include "stolab/store.hpp"

namespace stolab::harness {

// ---------------------------------------------------------------------------
// Scenarios

enum class Scenario { kHsBase, kS3aBase, kStocator, kHsCv2, kS3aCv2, kS3aCv2Fu };

inline constexpr Scenario kAllScenarios[] = {Scenario::kHsBase, Scenario::kS3aBase, Scenario::kStocator,
                                             Scenario::kHsCv2,  Scenario::kS3aCv2,  Scenario::kS3aCv2Fu};

std::string_view to_string(Scenario scenario);
std::optional<Scenario> parse_scenario(std::string_view text);

struct ScenarioConfig {
  Scenario scenario = Scenario::kStocator;
  bool stocator = true;
  legacy::LegacyProfile profile;
  engine::CommitterVersion committer = engine::CommitterVersion::kNone;
  stocator::ReadOption read_option = stocator::ReadOption::kListing;
  stocator::StocatorOptions stocator_options;
};

// Legacy scenarios always read by listing; `stocator_read` only affects Stocator.
ScenarioConfig describe(Scenario scenario, stocator::ReadOption stocator_read = stocator::ReadOption::kListing);
engine::ConnectorFactory connector_for(const ScenarioConfig& config);

// ---------------------------------------------------------------------------
// Workloads

enum class WorkloadKind { kSingleTask, kThreeTask, kWriteOnly, kCopy, kReadOnly };

std::string_view to_string(WorkloadKind kind);
std::optional<WorkloadKind> parse_workload(std::string_view text);

struct Workload {
  WorkloadKind kind = WorkloadKind::kSingleTask;
  std::uint32_t parts = 1;
  std::uint64_t part_size = 2;
  store::ConsistencyPolicy consistency;
  engine::FaultPlan faults;
  // ThreeTask only: every task uses task number 000000, as in the classic
  // three-part example trace.
  bool literal_task_numbers = false;

  static Workload single_task();
  static Workload three_task();
  static Workload write_only(std::uint32_t parts, std::uint64_t part_size);
  static Workload copy(std::uint32_t parts, std::uint64_t part_size);
  static Workload read_only(std::uint32_t parts, std::uint64_t part_size);

  std::string label() const;
};

// Output (or, for ReadOnly, input) dataset for a workload.
fs::FsPath output_path(const Workload& workload);
fs::FsPath input_path(const Workload& workload);

// ---------------------------------------------------------------------------
// Pricing

// Class A: PUT, COPY, GET container. Class B: GET, HEAD, DELETE, HEAD container.
struct PricingModel {
  double class_a = 1.0;
  double class_b = 1.0;

  static PricingModel uniform(double price) { return PricingModel{price, price}; }
  double price(store::RestOpKind kind) const;
  void validate() const;
};

bool is_class_a(store::RestOpKind kind);
double compute_cost(const store::OpTally& tally, const PricingModel& pricing);

// ---------------------------------------------------------------------------
// Matrix

struct MatrixOptions {
  std::uint32_t repeats = 1;
  std::uint64_t seed = 42;
  PricingModel pricing;
  stocator::ReadOption stocator_read_option = stocator::ReadOption::kListing;
  stocator::StocatorOptions stocator_options;
  std::optional<std::uint64_t> fast_upload_part_size;
};

struct CellReport {
  Scenario scenario = Scenario::kStocator;
  Workload workload;
  std::uint32_t repeat = 0;
  engine::RunReport run;
};

// One run on a private store; setup for read workloads is excluded from the tally.
CellReport run_cell(const Workload& workload, Scenario scenario, const MatrixOptions& options,
                    std::uint32_t repeat = 0);
std::vector<CellReport> run_matrix(const std::vector<Workload>& workloads, const std::vector<Scenario>& scenarios,
                                   const MatrixOptions& options);

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { kTable, kCsv, kJsonl };

std::optional<ReportFormat> parse_format(std::string_view text);

// Flat numeric view of a report, the unit of CSV/JSONL round trips.
struct ReportRow {
  std::string scenario;
  std::string workload;
  std::uint64_t head = 0;
  std::uint64_t put = 0;
  std::uint64_t copy = 0;
  std::uint64_t del = 0;
  std::uint64_t get_container = 0;
  std::uint64_t total = 0;
  std::uint64_t bytes_put = 0;
  std::uint64_t bytes_got = 0;
  std::uint64_t bytes_copied = 0;
  std::uint64_t peak_staged = 0;
  double cost = 0.0;
  bool complete = false;
  std::uint64_t get = 0;
  std::uint64_t head_container = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

ReportRow row_of(const CellReport& cell);
std::string render_rows(const std::vector<ReportRow>& rows, ReportFormat format);
std::string render_report(const std::vector<CellReport>& cells, ReportFormat format);
std::vector<ReportRow> parse_csv_report(std::string_view text);
std::vector<ReportRow> parse_jsonl_report(std::string_view text);

// Store events of every cell, in cell order, as JSONL.
std::string render_trace(const std::vector<CellReport>& cells);

// "<VERB> /<container>/<name>" lines, e.g. "PUT /res/data.txt/_SUCCESS".
std::string event_line(const store::StoreEvent& event);
// PUT and DELETE lines for objects other than the dataset marker.
std::vector<std::string> object_write_lines(const std::vector<store::StoreEvent>& trace, const fs::FsPath& dataset);
std::vector<std::string> all_event_lines(const std::vector<store::StoreEvent>& trace);

// ---------------------------------------------------------------------------
// Configuration: INI-style sections of key = value lines.

struct HarnessConfig {
  store::ConsistencyPolicy consistency;
  std::vector<Scenario> scenarios{std::begin(kAllScenarios), std::end(kAllScenarios)};
  std::vector<WorkloadKind> workloads{WorkloadKind::kSingleTask};
  std::uint32_t parts = 8;
  std::uint64_t part_size = 1ull << 20;
  std::optional<std::string> fault_plan;
  std::optional<store::Tick> speculation_threshold;
  std::optional<bool> abort_cleanup;
  std::optional<std::uint64_t> random_faults_seed;
  MatrixOptions matrix;
  ReportFormat format = ReportFormat::kTable;

  std::vector<Workload> build_workloads() const;
};

struct ConfigKey {
  std::string section;
  std::string key;
  std::string help;
};

const std::vector<ConfigKey>& config_keys();
HarnessConfig parse_config(std::string_view text);
// `key` may be bare ("parts") or qualified ("workload.parts").
void apply_setting(HarnessConfig& config, std::string_view key, std::string_view value);

// The shipped hazard schedule: listing lag 3, legacy v1/v2 and Stocator.
struct HazardVerdict {
  std::string label;
  bool wrote_success = false;
  bool complete = false;
  std::size_t parts_readable = 0;
  std::size_t expected_parts = 0;
  // Parts readable once listings have caught up; lower means data was lost.
  std::size_t settled_readable = 0;
};

std::vector<HazardVerdict> run_hazard_demo(const store::ConsistencyPolicy& policy, std::uint32_t parts,
                                           std::uint64_t part_size);

}  // namespace stolab::harness
