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

#include "stolab/fs_path.hpp"

#include <algorithm>
#include <charconv>

#include "stolab/error.hpp"

namespace stolab::fs {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<std::uint32_t> parse_attempt_number(std::string_view s) {
  if (!all_digits(s)) return std::nullopt;
  if (s.size() > 1 && s.front() == '0') return std::nullopt;  // must print back identically
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

constexpr std::string_view kJobCounter = "0000";
constexpr std::string_view kMapMarker = "m";

}  // namespace

// ---------------------------------------------------------------------------
// FsPath

FsPath::FsPath(std::string scheme, std::string container, std::vector<std::string> segments,
               std::string service)
    : scheme_(std::move(scheme)), container_(std::move(container)), service_(std::move(service)),
      segments_(std::move(segments)) {
  if (container_.empty()) throw Error(ErrorCode::kUsage, "path without a container");
  for (const auto& segment : segments_) {
    if (segment.empty() || segment.find('/') != std::string::npos) {
      throw Error(ErrorCode::kUsage, "invalid path segment '" + segment + "'");
    }
  }
}

FsPath FsPath::parse(std::string_view text) {
  std::string scheme;
  std::string_view rest = text;
  if (const auto pos = text.find("://"); pos != std::string_view::npos) {
    scheme = std::string(text.substr(0, pos));
    if (scheme.empty()) throw Error(ErrorCode::kUsage, "empty scheme in '" + std::string(text) + "'");
    rest = text.substr(pos + 3);
  } else if (!rest.empty() && rest.front() == '/') {
    rest.remove_prefix(1);
  }
  auto parts = split(rest, '/');
  if (parts.empty() || parts.front().empty()) {
    throw Error(ErrorCode::kUsage, "no container in '" + std::string(text) + "'");
  }
  std::string_view authority = parts.front();
  std::string container(authority);
  std::string service;
  if (const auto dot = authority.find('.'); dot != std::string_view::npos) {
    container = std::string(authority.substr(0, dot));
    service = std::string(authority.substr(dot + 1));
    if (container.empty() || service.empty()) {
      throw Error(ErrorCode::kUsage, "malformed authority in '" + std::string(text) + "'");
    }
  }
  std::vector<std::string> segments;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].empty()) throw Error(ErrorCode::kUsage, "empty segment in '" + std::string(text) + "'");
    segments.emplace_back(parts[i]);
  }
  return FsPath(std::move(scheme), std::move(container), std::move(segments), std::move(service));
}

std::string FsPath::name() const { return segments_.empty() ? std::string{} : segments_.back(); }

std::string FsPath::object_name() const {
  std::string out;
  for (const auto& segment : segments_) {
    if (!out.empty()) out += '/';
    out += segment;
  }
  return out;
}

FsPath FsPath::child(std::string_view segment) const {
  auto segments = segments_;
  segments.emplace_back(segment);
  return FsPath(scheme_, container_, std::move(segments), service_);
}

FsPath FsPath::parent() const {
  if (segments_.empty()) throw Error(ErrorCode::kUsage, "root path has no parent: " + str());
  auto segments = segments_;
  segments.pop_back();
  return FsPath(scheme_, container_, std::move(segments), service_);
}

bool FsPath::contains(const FsPath& other) const {
  if (other.container_ != container_ || other.segments_.size() < segments_.size()) return false;
  return std::equal(segments_.begin(), segments_.end(), other.segments_.begin());
}

FsPath FsPath::with_object_name(std::string_view object_name) const {
  std::vector<std::string> segments;
  if (!object_name.empty()) {
    for (auto part : split(object_name, '/')) {
      if (!part.empty()) segments.emplace_back(part);
    }
  }
  return FsPath(scheme_, container_, std::move(segments), service_);
}

std::string FsPath::str() const {
  std::string out = scheme_.empty() ? std::string("/") : scheme_ + "://";
  out += container_;
  if (!service_.empty()) out += "." + service_;
  for (const auto& segment : segments_) {
    out += '/';
    out += segment;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Attempt and task identifiers

std::string AttemptId::str() const {
  return "attempt_" + job_timestamp + "_" + std::string(kJobCounter) + "_" + std::string(kMapMarker) + "_" +
         task_number + "_" + std::to_string(attempt_number);
}

std::string AttemptId::task_str() const { return TaskRef{job_timestamp, task_number}.str(); }

std::optional<AttemptId> AttemptId::parse(std::string_view text) {
  constexpr std::string_view kPrefix = "attempt_";
  if (!text.starts_with(kPrefix)) return std::nullopt;
  const auto fields = split(text.substr(kPrefix.size()), '_');
  if (fields.size() != 5) return std::nullopt;
  if (!all_digits(fields[0]) || fields[1] != kJobCounter || fields[2] != kMapMarker || !all_digits(fields[3])) {
    return std::nullopt;
  }
  const auto number = parse_attempt_number(fields[4]);
  if (!number) return std::nullopt;
  return AttemptId{std::string(fields[0]), std::string(fields[3]), *number};
}

std::string TaskRef::str() const {
  return "task_" + job_timestamp + "_" + std::string(kJobCounter) + "_" + std::string(kMapMarker) + "_" + task_number;
}

std::optional<TaskRef> TaskRef::parse(std::string_view text) {
  constexpr std::string_view kPrefix = "task_";
  if (!text.starts_with(kPrefix)) return std::nullopt;
  const auto fields = split(text.substr(kPrefix.size()), '_');
  if (fields.size() != 4) return std::nullopt;
  if (!all_digits(fields[0]) || fields[1] != kJobCounter || fields[2] != kMapMarker || !all_digits(fields[3])) {
    return std::nullopt;
  }
  return TaskRef{std::string(fields[0]), std::string(fields[3])};
}

// ---------------------------------------------------------------------------
// Temporary-path codec

std::string_view to_string(TempDepth depth) {
  switch (depth) {
    case TempDepth::kTempRoot: return "temp-root";
    case TempDepth::kJobTemp: return "job-temp";
    case TempDepth::kAttemptsRoot: return "attempts-root";
    case TempDepth::kAttemptDir: return "attempt-dir";
    case TempDepth::kPartFile: return "part-file";
    case TempDepth::kTaskDir: return "task-dir";
    case TempDepth::kTaskFile: return "task-file";
  }
  return "?";
}

std::optional<TempPathMatch> match_temp_pattern(const FsPath& path) {
  const auto& segs = path.segments();
  const auto it = std::find(segs.begin(), segs.end(), kTemporary);
  // The dataset needs at least one segment of its own.
  if (it == segs.end() || it == segs.begin()) return std::nullopt;

  TempPathMatch m;
  m.dataset = FsPath(path.scheme(), path.container(), std::vector<std::string>(segs.begin(), it), path.service());
  const std::vector<std::string> rest(it + 1, segs.end());

  if (rest.empty()) {
    m.depth = TempDepth::kTempRoot;
    return m;
  }
  if (rest[0] != kAppAttempt) return std::nullopt;
  if (rest.size() == 1) {
    m.depth = TempDepth::kJobTemp;
    return m;
  }
  if (rest[1] == kTemporary) {
    if (rest.size() == 2) {
      m.depth = TempDepth::kAttemptsRoot;
      return m;
    }
    m.attempt = AttemptId::parse(rest[2]);
    if (!m.attempt || rest.size() > 4) return std::nullopt;
    if (rest.size() == 3) {
      m.depth = TempDepth::kAttemptDir;
    } else {
      m.depth = TempDepth::kPartFile;
      m.part = rest[3];
    }
    return m;
  }
  m.task = TaskRef::parse(rest[1]);
  if (!m.task || rest.size() > 3) return std::nullopt;
  if (rest.size() == 2) {
    m.depth = TempDepth::kTaskDir;
  } else {
    m.depth = TempDepth::kTaskFile;
    m.part = rest[2];
  }
  return m;
}

FsPath render(const TempPathMatch& m) {
  FsPath path = m.dataset.child(kTemporary);
  if (m.depth == TempDepth::kTempRoot) return path;
  path = path.child(kAppAttempt);
  switch (m.depth) {
    case TempDepth::kTempRoot:
    case TempDepth::kJobTemp:
      return path;
    case TempDepth::kAttemptsRoot:
      return path.child(kTemporary);
    case TempDepth::kAttemptDir:
    case TempDepth::kPartFile: {
      if (!m.attempt) throw Error(ErrorCode::kUsage, "attempt depth without attempt id");
      path = path.child(kTemporary).child(m.attempt->str());
      if (m.depth == TempDepth::kPartFile) {
        if (!m.part) throw Error(ErrorCode::kMissingPart, "part-file depth without part");
        path = path.child(*m.part);
      }
      return path;
    }
    case TempDepth::kTaskDir:
    case TempDepth::kTaskFile: {
      if (!m.task) throw Error(ErrorCode::kUsage, "task depth without task id");
      path = path.child(m.task->str());
      if (m.depth == TempDepth::kTaskFile) {
        if (!m.part) throw Error(ErrorCode::kMissingPart, "task-file depth without part");
        path = path.child(*m.part);
      }
      return path;
    }
  }
  return path;
}

std::string final_object_leaf(std::string_view part, const AttemptId& attempt) {
  return std::string(part) + "_" + attempt.str();
}

FsPath final_name_for(const TempPathMatch& m) {
  if (m.depth != TempDepth::kPartFile || !m.part || !m.attempt) {
    throw Error(ErrorCode::kMissingPart,
                "no part file at " + std::string(to_string(m.depth)) + " depth of " + m.dataset.str());
  }
  return m.dataset.child(final_object_leaf(*m.part, *m.attempt));
}

std::optional<FinalName> parse_final_name(std::string_view name) {
  if (name.empty()) return std::nullopt;
  if (name == kSuccessName) return FinalName{NameKind::kSuccessMarker, std::string(name), std::nullopt};
  constexpr std::string_view kMarker = "_attempt_";
  if (const auto pos = name.rfind(kMarker); pos != std::string_view::npos && pos > 0) {
    if (auto attempt = AttemptId::parse(name.substr(pos + 1))) {
      return FinalName{NameKind::kPart, std::string(name.substr(0, pos)), std::move(attempt)};
    }
  }
  return FinalName{NameKind::kPart, std::string(name), std::nullopt};
}

}  // namespace stolab::fs
