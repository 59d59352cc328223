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

#include "stolab/store.hpp"

namespace stolab::fs {

// "scheme://container[.service]/a/b" or "/container/a/b". Segments never
// contain '/' and are never empty.
class FsPath {
 public:
  FsPath() = default;
  FsPath(std::string scheme, std::string container, std::vector<std::string> segments,
         std::string service = {});

  static FsPath parse(std::string_view text);

  const std::string& scheme() const { return scheme_; }
  const std::string& container() const { return container_; }
  const std::string& service() const { return service_; }
  const std::vector<std::string>& segments() const { return segments_; }

  bool is_root() const { return segments_.empty(); }
  // Last segment; empty for the container root.
  std::string name() const;
  // Segments joined by '/', i.e. the object name inside the container.
  std::string object_name() const;
  store::ObjectKey key() const { return store::ObjectKey{container_, object_name()}; }

  FsPath child(std::string_view segment) const;
  FsPath parent() const;
  // True when `other` equals this path or lies beneath it.
  bool contains(const FsPath& other) const;
  FsPath with_object_name(std::string_view object_name) const;

  std::string str() const;

  friend bool operator==(const FsPath&, const FsPath&) = default;
  friend auto operator<=>(const FsPath&, const FsPath&) = default;

 private:
  std::string scheme_;
  std::string container_;
  std::string service_;
  std::vector<std::string> segments_;
};

// Identity of one execution attempt: attempt_<ts>_0000_m_<task>_<n>.
struct AttemptId {
  std::string job_timestamp;
  std::string task_number;
  std::uint32_t attempt_number = 0;

  std::string str() const;
  // task_<ts>_0000_m_<task>, the committed-task directory name.
  std::string task_str() const;

  static std::optional<AttemptId> parse(std::string_view text);

  friend bool operator==(const AttemptId&, const AttemptId&) = default;
  friend auto operator<=>(const AttemptId&, const AttemptId&) = default;
};

struct TaskRef {
  std::string job_timestamp;
  std::string task_number;

  std::string str() const;
  static std::optional<TaskRef> parse(std::string_view text);

  friend bool operator==(const TaskRef&, const TaskRef&) = default;
};

inline constexpr std::string_view kTemporary = "_temporary";
inline constexpr std::string_view kAppAttempt = "0";
inline constexpr std::string_view kSuccessName = "_SUCCESS";

// Which level of the committer's temporary tree a path names.
enum class TempDepth {
  kTempRoot,      // <ds>/_temporary
  kJobTemp,       // <ds>/_temporary/0
  kAttemptsRoot,  // <ds>/_temporary/0/_temporary
  kAttemptDir,    // <ds>/_temporary/0/_temporary/attempt_...
  kPartFile,      // <ds>/_temporary/0/_temporary/attempt_.../<part>
  kTaskDir,       // <ds>/_temporary/0/task_...
  kTaskFile,      // <ds>/_temporary/0/task_.../<part>
};

std::string_view to_string(TempDepth depth);

struct TempPathMatch {
  FsPath dataset;
  TempDepth depth = TempDepth::kJobTemp;
  std::optional<AttemptId> attempt;  // kAttemptDir, kPartFile
  std::optional<TaskRef> task;       // kTaskDir, kTaskFile
  std::optional<std::string> part;   // kPartFile, kTaskFile

  friend bool operator==(const TempPathMatch&, const TempPathMatch&) = default;
};

std::optional<TempPathMatch> match_temp_pattern(const FsPath& path);
// Inverse of match_temp_pattern.
FsPath render(const TempPathMatch& match);

// <ds>/<part>_attempt_<ts>_0000_m_<task>_<n>. Throws kMissingPart unless the
// match is at part-file depth.
FsPath final_name_for(const TempPathMatch& match);
std::string final_object_leaf(std::string_view part, const AttemptId& attempt);

enum class NameKind { kPart, kSuccessMarker };

struct FinalName {
  NameKind kind = NameKind::kPart;
  std::string part;
  std::optional<AttemptId> attempt;

  friend bool operator==(const FinalName&, const FinalName&) = default;
};

// Classifies the last path segment of an output object. Names without an
// attempt suffix parse as a part with no attempt.
std::optional<FinalName> parse_final_name(std::string_view name);

}  // namespace stolab::fs
