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

#include "stolab/engine.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <random>

#include "stolab/error.hpp"

namespace stolab::engine {

using fs::FsPath;
using store::Tick;

namespace {

constexpr std::uint32_t kMaxAttemptsPerTask = 64;
constexpr Tick kMaxRounds = 1'000'000;

bool digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_not_found(const Error& e) { return e.code() == ErrorCode::kNotFound; }

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

}  // namespace

std::string_view to_string(CommitterVersion version) {
  switch (version) {
    case CommitterVersion::kV1: return "v1";
    case CommitterVersion::kV2: return "v2";
    case CommitterVersion::kNone: return "none";
  }
  return "?";
}

std::optional<CommitterVersion> parse_committer(std::string_view text) {
  if (text == "v1" || text == "V1") return CommitterVersion::kV1;
  if (text == "v2" || text == "V2") return CommitterVersion::kV2;
  if (text == "none" || text == "None") return CommitterVersion::kNone;
  return std::nullopt;
}

std::string part_name(std::uint32_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "part-%05u", index);
  return buf;
}

std::string task_number_for(std::uint32_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06u", index);
  return buf;
}

std::vector<PartSpec> JobSpec::uniform_parts(std::uint32_t count, std::uint64_t size, std::uint64_t seed) {
  std::vector<PartSpec> parts;
  parts.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    parts.push_back(PartSpec{i, size, seed * 1'000'003ull + i, task_number_for(i)});
  }
  return parts;
}

void JobSpec::validate() const {
  if (dataset.is_root()) throw Error(ErrorCode::kConfig, "job output must name a dataset inside the container");
  if (!digits(job_timestamp)) throw Error(ErrorCode::kConfig, "job timestamp must be digits: " + job_timestamp);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0 && parts[i].index <= parts[i - 1].index) {
      throw Error(ErrorCode::kConfig, "part indices must be strictly increasing");
    }
    if (!digits(parts[i].task_number)) throw Error(ErrorCode::kConfig, "task number must be digits");
  }
  if (!write_output && !input) throw Error(ErrorCode::kConfig, "a job must read or write something");
}

store::Bytes canonical_body(std::uint64_t seed, std::uint64_t size) {
  store::Bytes body(size);
  std::mt19937_64 gen(seed);
  std::uint64_t i = 0;
  for (; i + 8 <= size; i += 8) {
    const std::uint64_t word = gen();
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(body.data() + i, &word, 8);
    } else {
      for (unsigned b = 0; b < 8; ++b) body[i + b] = static_cast<std::uint8_t>(word >> (8 * b));
    }
  }
  // Tail takes the low bytes of one more word.
  if (i < size) {
    const std::uint64_t word = gen();
    for (unsigned b = 0; i < size; ++b, ++i) body[i] = static_cast<std::uint8_t>(word >> (8 * b));
  }
  return body;
}

// ---------------------------------------------------------------------------
// Fault plans

std::string to_string(const AttemptOutcome& outcome) {
  switch (outcome.kind) {
    case OutcomeKind::kSucceed: return "succeed";
    case OutcomeKind::kFailBeforeClose: return "fail_before_close";
    case OutcomeKind::kFailAfterCloseBeforeCommit: return "fail_after_close";
    case OutcomeKind::kSlow: return "slow:" + std::to_string(outcome.slow_ticks);
  }
  return "?";
}

std::optional<AttemptOutcome> parse_outcome(std::string_view text) {
  if (text == "succeed") return AttemptOutcome::succeed();
  if (text == "fail_before_close") return AttemptOutcome::fail_before_close();
  if (text == "fail_after_close") return AttemptOutcome::fail_after_close();
  if (text.starts_with("slow:")) {
    if (auto ticks = parse_u64(text.substr(5))) return AttemptOutcome::slow(*ticks);
  }
  return std::nullopt;
}

AttemptOutcome FaultPlan::outcome(std::uint32_t task, std::uint32_t ordinal) const {
  const auto it = outcomes.find({task, ordinal});
  return it == outcomes.end() ? AttemptOutcome::succeed() : it->second;
}

FaultPlan FaultPlan::three_task_speculation() {
  FaultPlan plan;
  plan.outcomes[{2, 0}] = AttemptOutcome::fail_after_close();
  plan.outcomes[{2, 1}] = AttemptOutcome::slow(6);
  plan.outcomes[{2, 2}] = AttemptOutcome::slow(20);
  plan.speculation_threshold = 2;
  return plan;
}

FaultPlan FaultPlan::random(std::uint64_t seed, std::uint32_t tasks) {
  // Raw generator output only, so plans replay identically on any platform.
  std::mt19937_64 rng(seed);
  FaultPlan plan;
  plan.seed = seed;
  plan.speculation_threshold = rng() % 5;
  plan.abort_cleanup = rng() % 2 == 0;
  for (std::uint32_t task = 0; task < tasks; ++task) {
    const auto planned = static_cast<std::uint32_t>(rng() % 5);
    for (std::uint32_t ordinal = 0; ordinal < planned; ++ordinal) {
      switch (rng() % 4) {
        case 0: plan.outcomes[{task, ordinal}] = AttemptOutcome::succeed(); break;
        case 1: plan.outcomes[{task, ordinal}] = AttemptOutcome::fail_before_close(); break;
        case 2: plan.outcomes[{task, ordinal}] = AttemptOutcome::fail_after_close(); break;
        default: plan.outcomes[{task, ordinal}] = AttemptOutcome::slow(1 + rng() % 8); break;
      }
    }
  }
  return plan;
}

std::string FaultPlan::encode_outcomes() const {
  std::string out;
  for (const auto& [key, outcome] : outcomes) {
    if (!out.empty()) out += ';';
    out += std::to_string(key.first) + ":" + std::to_string(key.second) + "=" + to_string(outcome);
  }
  return out;
}

std::map<std::pair<std::uint32_t, std::uint32_t>, AttemptOutcome> FaultPlan::parse_outcomes(std::string_view text) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, AttemptOutcome> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view entry = text.substr(start, end - start);
    start = end + 1;
    if (entry.empty()) continue;
    const auto colon = entry.find(':');
    const auto eq = entry.find('=');
    if (colon == std::string_view::npos || eq == std::string_view::npos || colon > eq) {
      throw Error(ErrorCode::kConfig, "fault entry must be task:attempt=outcome, got '" + std::string(entry) + "'");
    }
    const auto task = parse_u64(entry.substr(0, colon));
    const auto ordinal = parse_u64(entry.substr(colon + 1, eq - colon - 1));
    const auto outcome = parse_outcome(entry.substr(eq + 1));
    if (!task || !ordinal || !outcome) throw Error(ErrorCode::kConfig, "bad fault entry '" + std::string(entry) + "'");
    out[{static_cast<std::uint32_t>(*task), static_cast<std::uint32_t>(*ordinal)}] = *outcome;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reader

DatasetRead read_dataset(fs::FileSystem& connector, const FsPath& dataset, stocator::ReadOption option) {
  DatasetRead result;
  auto* stocator_fs = dynamic_cast<stocator::StocatorFileSystem*>(&connector);
  std::vector<stocator::ResolvedPart> parts;

  if (option == stocator::ReadOption::kManifest) {
    if (stocator_fs == nullptr) throw Error(ErrorCode::kConfig, "manifest reads need the Stocator connector");
    if (!stocator_fs->is_stocator_dataset(dataset)) return result;
    try {
      parts = stocator_fs->resolve_manifest_entries(dataset);
    } catch (const Error& e) {
      if (!is_not_found(e)) throw;
      return result;
    }
  } else {
    if (!connector.exists(dataset.child(fs::kSuccessName))) return result;
    if (stocator_fs != nullptr && stocator_fs->is_stocator_dataset(dataset)) {
      parts = stocator_fs->resolve_parts_via_listing(dataset);
    } else {
      std::vector<store::ListingEntry> entries;
      for (const auto& status : connector.list_status(dataset)) {
        if (!status.is_directory) entries.push_back(store::ListingEntry{status.path.object_name(), status.length, 0});
      }
      const std::string prefix = dataset.object_name() + "/";
      parts = stocator::select_attempts(dataset.container(), prefix, entries);
    }
  }

  result.success_present = true;
  for (auto& part : parts) {
    PartRead read{part.part, part.attempt, part.key, nullptr};
    try {
      read.data = connector.open(dataset.with_object_name(part.key.name)).data;
    } catch (const Error& e) {
      if (!is_not_found(e)) throw;
    }
    result.parts.push_back(std::move(read));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Job execution

namespace {

enum class Phase { kMkdirs, kWrite, kWaiting, kCommitRequest, kCommitted, kFailed, kAborted };

bool running(Phase phase) {
  return phase == Phase::kMkdirs || phase == Phase::kWrite || phase == Phase::kWaiting ||
         phase == Phase::kCommitRequest;
}

struct Attempt {
  std::uint32_t task = 0;
  std::uint32_t ordinal = 0;
  fs::AttemptId id;
  AttemptOutcome outcome;
  std::unique_ptr<fs::FileSystem> connector;
  Phase phase = Phase::kMkdirs;
  Tick started = 0;
  Tick wait_until = 0;
  bool dirs_made = false;
  bool opened = false;
};

struct TaskState {
  bool done = false;
  std::uint32_t launched = 0;
  std::optional<fs::AttemptId> committed;
  bool read_ok = false;
};

class JobRunner {
 public:
  JobRunner(const JobSpec& spec, const ConnectorFactory& factory, store::ObjectStore& store, const FaultPlan& faults)
      : spec_(spec), factory_(factory), store_(store), faults_(faults), tasks_(spec.parts.size()) {}

  RunReport run();

 private:
  FsPath job_temp() const { return spec_.dataset.child(fs::kTemporary).child(fs::kAppAttempt); }
  FsPath attempt_dir(const Attempt& a) const { return job_temp().child(fs::kTemporary).child(a.id.str()); }
  FsPath part_temp(const Attempt& a) const { return attempt_dir(a).child(part_name(spec_.parts[a.task].index)); }
  FsPath task_dir(const Attempt& a) const { return job_temp().child(a.id.task_str()); }

  void launch(std::uint32_t task);
  void step(Attempt& a);
  void write_part(Attempt& a);
  void request_commit(Attempt& a);
  void commit_task(Attempt& a);
  void abort_attempt(Attempt& a);
  void commit_job();
  void plan_inputs();
  store::Bytes produce_body(Attempt& a);
  void speculate();
  bool all_done() const;
  void verify(RunReport& report);

  const JobSpec& spec_;
  const ConnectorFactory& factory_;
  store::ObjectStore& store_;
  const FaultPlan& faults_;

  std::unique_ptr<fs::FileSystem> driver_;
  std::vector<TaskState> tasks_;
  std::vector<std::unique_ptr<Attempt>> attempts_;
  std::vector<std::uint32_t> pending_launches_;
  std::vector<FsPath> inputs_;
  std::vector<std::string> log_;
  bool wrote_success_ = false;
};

void JobRunner::launch(std::uint32_t task) {
  TaskState& state = tasks_[task];
  if (state.done) return;
  if (state.launched >= kMaxAttemptsPerTask) {
    throw Error(ErrorCode::kUsage, "task " + std::to_string(task) + " exceeded the attempt limit");
  }
  auto a = std::make_unique<Attempt>();
  a->task = task;
  a->ordinal = state.launched++;
  a->id = fs::AttemptId{spec_.job_timestamp, spec_.parts[task].task_number, spec_.first_attempt_number + a->ordinal};
  a->outcome = spec_.write_output ? faults_.outcome(task, a->ordinal) : AttemptOutcome::succeed();
  a->connector = factory_(store_);
  a->phase = spec_.write_output ? Phase::kMkdirs : Phase::kWrite;
  a->started = store_.now() + 1;
  attempts_.push_back(std::move(a));
}

void JobRunner::plan_inputs() {
  for (const auto& status : driver_->list_status(*spec_.input)) {
    if (status.is_directory || status.path.name() == fs::kSuccessName) continue;
    inputs_.push_back(status.path);
  }
}

store::Bytes JobRunner::produce_body(Attempt& a) {
  if (!spec_.input) {
    const PartSpec& part = spec_.parts[a.task];
    return canonical_body(part.seed, part.size);
  }
  if (a.task >= inputs_.size()) {
    log_.push_back("input-missing task " + std::to_string(a.task));
    return {};
  }
  const FsPath& source = inputs_[a.task];
  a.connector->get_file_status(source);
  const fs::InputData input = a.connector->open(source);
  return *input.data;
}

void JobRunner::write_part(Attempt& a) {
  store::Bytes body = produce_body(a);
  if (!spec_.write_output) {
    const PartSpec& part = spec_.parts[a.task];
    tasks_[a.task].read_ok = body == canonical_body(part.seed, part.size);
    tasks_[a.task].done = true;
    a.phase = Phase::kCommitted;
    return;
  }
  fs::CreateOptions options;
  options.overwrite = false;
  auto out = a.connector->create(part_temp(a), options);
  a.opened = true;
  if (a.outcome.kind == OutcomeKind::kFailBeforeClose) {
    out->write(std::span(body).first(body.size() / 2));
    out->abandon();
    a.phase = Phase::kFailed;
    return;
  }
  out->write(body);
  out->close();
  switch (a.outcome.kind) {
    case OutcomeKind::kFailAfterCloseBeforeCommit:
      a.phase = Phase::kFailed;
      break;
    case OutcomeKind::kSlow:
      a.wait_until = store_.now() + a.outcome.slow_ticks;
      a.phase = Phase::kWaiting;
      break;
    default:
      a.phase = Phase::kCommitRequest;
      break;
  }
}

void JobRunner::step(Attempt& a) {
  switch (a.phase) {
    case Phase::kMkdirs:
      a.connector->mkdirs(attempt_dir(a));
      a.dirs_made = true;
      a.phase = Phase::kWrite;
      break;
    case Phase::kWrite:
      write_part(a);
      if (a.phase == Phase::kFailed) {
        const bool other_running = std::any_of(attempts_.begin(), attempts_.end(), [&](const auto& other) {
          return other.get() != &a && other->task == a.task && running(other->phase);
        });
        if (!other_running) pending_launches_.push_back(a.task);
      }
      break;
    case Phase::kWaiting:
      if (store_.now() >= a.wait_until) request_commit(a);
      break;
    case Phase::kCommitRequest:
      request_commit(a);
      break;
    default:
      break;
  }
}

void JobRunner::request_commit(Attempt& a) {
  TaskState& state = tasks_[a.task];
  if (state.done) {
    abort_attempt(a);
    return;
  }
  commit_task(a);
  a.phase = Phase::kCommitted;
  state.done = true;
  state.committed = a.id;
  // The driver aborts every other attempt of the task, in attempt order.
  std::vector<Attempt*> losers;
  for (auto& other : attempts_) {
    if (other.get() != &a && other->task == a.task &&
        (running(other->phase) || other->phase == Phase::kFailed)) {
      losers.push_back(other.get());
    }
  }
  std::sort(losers.begin(), losers.end(), [](auto* x, auto* y) { return x->ordinal < y->ordinal; });
  for (Attempt* loser : losers) abort_attempt(*loser);
}

void JobRunner::commit_task(Attempt& a) {
  for (const auto& status : a.connector->list_status(attempt_dir(a))) {
    if (status.is_directory) continue;
    const FsPath dst = spec_.committer == CommitterVersion::kV2 ? spec_.dataset.child(status.path.name())
                                                                : task_dir(a).child(status.path.name());
    try {
      a.connector->rename(status.path, dst);
    } catch (const Error& e) {
      if (!is_not_found(e)) throw;
      log_.push_back("rename-miss " + status.path.str());
    }
  }
}

void JobRunner::abort_attempt(Attempt& a) {
  a.phase = Phase::kAborted;
  if (!faults_.abort_cleanup) return;
  if (a.opened) a.connector->remove(part_temp(a), false);
  if (a.dirs_made) a.connector->remove(attempt_dir(a), true);
}

void JobRunner::commit_job() {
  if (spec_.committer != CommitterVersion::kV2) {
    for (const auto& entry : driver_->list_status(job_temp())) {
      if (!entry.is_directory || !fs::TaskRef::parse(entry.path.name())) continue;
      for (const auto& file : driver_->list_status(entry.path)) {
        if (file.is_directory) continue;
        try {
          driver_->rename(file.path, spec_.dataset.child(file.path.name()));
        } catch (const Error& e) {
          if (!is_not_found(e)) throw;
          log_.push_back("rename-miss " + file.path.str());
        }
      }
    }
  }
  driver_->remove(spec_.dataset.child(fs::kTemporary), true);

  fs::SuccessManifest manifest;
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].committed) manifest.committed.emplace(part_name(spec_.parts[i].index), *tasks_[i].committed);
  }
  const bool with_manifest = spec_.read_option == stocator::ReadOption::kManifest;
  driver_->write_success(spec_.dataset, with_manifest ? &manifest : nullptr);
  wrote_success_ = true;

  // Driver's status check on the final output path.
  driver_->list_status(spec_.dataset);
}

void JobRunner::speculate() {
  if (faults_.speculation_threshold == 0) return;
  for (std::uint32_t task = 0; task < tasks_.size(); ++task) {
    if (tasks_[task].done) continue;
    std::vector<const Attempt*> live;
    for (const auto& a : attempts_) {
      if (a->task == task && running(a->phase)) live.push_back(a.get());
    }
    if (live.size() == 1 && store_.now() >= live.front()->started &&
        store_.now() - live.front()->started > faults_.speculation_threshold) {
      pending_launches_.push_back(task);
    }
  }
}

bool JobRunner::all_done() const {
  return std::all_of(tasks_.begin(), tasks_.end(), [](const TaskState& t) { return t.done; });
}

void JobRunner::verify(RunReport& report) {
  report.expected_parts = spec_.parts.size();
  if (!spec_.write_output) {
    report.parts_readable = static_cast<std::size_t>(
        std::count_if(tasks_.begin(), tasks_.end(), [](const TaskState& t) { return t.read_ok; }));
    report.complete = report.parts_readable == report.expected_parts;
    return;
  }
  auto reader = factory_(store_);
  const DatasetRead read = read_dataset(*reader, spec_.dataset, spec_.read_option);
  std::map<std::string, const PartSpec*> expected;
  for (const auto& part : spec_.parts) expected[part_name(part.index)] = &part;
  std::size_t readable = 0;
  for (const auto& part : read.parts) {
    report.resolution[part.part] = part.attempt;
    const auto it = expected.find(part.part);
    if (it == expected.end() || !part.data) continue;
    if (*part.data == canonical_body(it->second->seed, it->second->size)) ++readable;
  }
  report.parts_readable = readable;
  report.complete = readable == report.expected_parts && read.parts.size() == report.expected_parts;
  if (!report.wrote_success) report.resolution.clear();
}

RunReport JobRunner::run() {
  spec_.validate();
  store_.reset_tally();
  const std::size_t trace_start = store_.trace().size();

  driver_ = factory_(store_);
  if (spec_.committer == CommitterVersion::kNone && !driver_->rename_free()) {
    throw Error(ErrorCode::kConfig, "committer 'none' requires a rename-free connector");
  }
  if (spec_.input) plan_inputs();
  if (spec_.write_output) driver_->mkdirs(job_temp());
  for (std::uint32_t task = 0; task < tasks_.size(); ++task) launch(task);
  store_.advance(1);

  for (Tick round = 0; !all_done(); ++round) {
    if (round >= kMaxRounds) throw Error(ErrorCode::kUsage, "job did not converge");
    std::vector<Attempt*> order;
    for (auto& a : attempts_) {
      if (running(a->phase)) order.push_back(a.get());
    }
    std::sort(order.begin(), order.end(), [](auto* x, auto* y) {
      return std::tie(x->task, x->ordinal) < std::tie(y->task, y->ordinal);
    });
    for (Attempt* a : order) {
      if (running(a->phase)) step(*a);
    }
    speculate();
    auto launches = std::move(pending_launches_);
    pending_launches_.clear();
    std::sort(launches.begin(), launches.end());
    launches.erase(std::unique(launches.begin(), launches.end()), launches.end());
    for (std::uint32_t task : launches) launch(task);
    if (all_done()) break;
    store_.advance(1);
  }
  if (spec_.write_output) commit_job();

  RunReport report;
  report.tally = store_.snapshot_tally();
  report.trace.assign(store_.trace().begin() + static_cast<std::ptrdiff_t>(trace_start), store_.trace().end());
  report.wrote_success = wrote_success_;
  report.finished_at = store_.now();

  store_.set_trace_enabled(false);
  verify(report);
  store_.set_trace_enabled(true);
  report.log = std::move(log_);
  return report;
}

}  // namespace

RunReport run_job(const JobSpec& spec, const ConnectorFactory& connector, store::ObjectStore& store,
                  const FaultPlan& faults) {
  JobRunner runner(spec, connector, store, faults);
  return runner.run();
}

RunReport run_job(const JobSpec& spec, const ConnectorFactory& connector, const store::ConsistencyPolicy& policy,
                  const FaultPlan& faults) {
  store::ObjectStore store(policy);
  return run_job(spec, connector, store, faults);
}

}  // namespace stolab::engine
