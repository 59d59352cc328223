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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stolab/filesystem.hpp"
#include "stolab/stocator.hpp"
#include "stolab/store.hpp"

namespace stolab::engine {

enum class CommitterVersion {
  kV1,    // rename at task commit, rename again at job commit
  kV2,    // single rename at task commit
  kNone,  // v1 call sequence over a rename-free connector
};

std::string_view to_string(CommitterVersion version);
std::optional<CommitterVersion> parse_committer(std::string_view text);

struct PartSpec {
  std::uint32_t index = 0;
  std::uint64_t size = 0;
  std::uint64_t seed = 0;
  // Zero-padded task digits used in attempt names.
  std::string task_number;
};

struct JobSpec {
  fs::FsPath dataset;
  std::string job_timestamp = "201512062056";
  std::vector<PartSpec> parts;
  CommitterVersion committer = CommitterVersion::kV1;
  stocator::ReadOption read_option = stocator::ReadOption::kListing;
  std::uint32_t first_attempt_number = 0;
  // When set, task i reads the i-th file of this dataset and writes its bytes.
  std::optional<fs::FsPath> input;
  bool write_output = true;

  // Parts 0..n-1 with task numbers equal to their zero-padded index.
  static std::vector<PartSpec> uniform_parts(std::uint32_t count, std::uint64_t size, std::uint64_t seed);
  void validate() const;
};

std::string part_name(std::uint32_t index);
std::string task_number_for(std::uint32_t index);

// Deterministic body for a part; every attempt of a task writes exactly this.
store::Bytes canonical_body(std::uint64_t seed, std::uint64_t size);

enum class OutcomeKind { kSucceed, kFailBeforeClose, kFailAfterCloseBeforeCommit, kSlow };

struct AttemptOutcome {
  OutcomeKind kind = OutcomeKind::kSucceed;
  // Extra ticks between closing the output and asking to commit (kSlow).
  store::Tick slow_ticks = 0;

  static AttemptOutcome succeed() { return {}; }
  static AttemptOutcome fail_before_close() { return {OutcomeKind::kFailBeforeClose, 0}; }
  static AttemptOutcome fail_after_close() { return {OutcomeKind::kFailAfterCloseBeforeCommit, 0}; }
  static AttemptOutcome slow(store::Tick ticks) { return {OutcomeKind::kSlow, ticks}; }

  friend bool operator==(const AttemptOutcome&, const AttemptOutcome&) = default;
};

std::string to_string(const AttemptOutcome& outcome);
std::optional<AttemptOutcome> parse_outcome(std::string_view text);

// Fail-stop fault schedule. Attempts not listed succeed, so every task
// eventually commits.
struct FaultPlan {
  // (task index, attempt ordinal) -> outcome.
  std::map<std::pair<std::uint32_t, std::uint32_t>, AttemptOutcome> outcomes;
  // A task whose only running attempt has run longer than this gets a
  // speculative copy. Zero disables speculation.
  store::Tick speculation_threshold = 0;
  // When false, losing attempts are never cleaned up.
  bool abort_cleanup = true;
  std::uint64_t seed = 0;

  AttemptOutcome outcome(std::uint32_t task, std::uint32_t ordinal) const;

  // Task 2 runs three times: attempt 0 dies after writing, attempt 1 is slow
  // enough to trigger a speculative attempt 2, and attempt 1 commits first.
  static FaultPlan three_task_speculation();
  // Replayable random plan over `tasks` tasks.
  static FaultPlan random(std::uint64_t seed, std::uint32_t tasks);

  // Text form: "task:ordinal=outcome" entries separated by ';'.
  std::string encode_outcomes() const;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, AttemptOutcome> parse_outcomes(std::string_view text);
};

using ConnectorFactory = std::function<std::unique_ptr<fs::FileSystem>(store::ObjectStore&)>;

struct RunReport {
  store::OpTally tally;
  std::vector<store::StoreEvent> trace;
  bool wrote_success = false;
  std::size_t parts_readable = 0;
  std::size_t expected_parts = 0;
  bool complete = false;
  std::map<std::string, std::optional<fs::AttemptId>> resolution;
  double cost = 0.0;
  // Engine-level notes such as renames skipped because a listing missed them.
  std::vector<std::string> log;
  store::Tick finished_at = 0;
};

struct PartRead {
  std::string part;
  std::optional<fs::AttemptId> attempt;
  store::ObjectKey key;
  std::shared_ptr<const store::Bytes> data;
};

struct DatasetRead {
  bool success_present = false;
  std::vector<PartRead> parts;
};

// Consumer-side read of a committed dataset. Empty when _SUCCESS is absent.
DatasetRead read_dataset(fs::FileSystem& connector, const fs::FsPath& dataset, stocator::ReadOption option);

// Runs one job against `store`, which keeps its clock and contents. The
// report's tally and trace cover only the job itself.
RunReport run_job(const JobSpec& spec, const ConnectorFactory& connector, store::ObjectStore& store,
                  const FaultPlan& faults = {});
RunReport run_job(const JobSpec& spec, const ConnectorFactory& connector, const store::ConsistencyPolicy& policy,
                  const FaultPlan& faults = {});

}  // namespace stolab::engine
