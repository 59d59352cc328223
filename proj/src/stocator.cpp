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

#include "stolab/stocator.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <tuple>

#include "stolab/error.hpp"

namespace stolab::stocator {

using fs::FsPath;
using store::ObjectKey;

std::string_view to_string(ReadOption option) {
  return option == ReadOption::kListing ? "listing" : "manifest";
}

std::optional<ReadOption> parse_read_option(std::string_view text) {
  if (text == "listing" || text == "Listing") return ReadOption::kListing;
  if (text == "manifest" || text == "Manifest") return ReadOption::kManifest;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// HeadCache

HeadCache::HeadCache(std::size_t capacity) : capacity_(capacity) {}

std::optional<store::ObjectHead> HeadCache::get(const ObjectKey& key) {
  auto it = index_.find(key.str());
  if (it == index_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  lru_.splice(lru_.begin(), lru_, it->second);
  return it->second->second;
}

void HeadCache::put(const ObjectKey& key, store::ObjectHead head) {
  if (capacity_ == 0) return;
  const std::string id = key.str();
  if (auto it = index_.find(id); it != index_.end()) {
    it->second->second = std::move(head);
    lru_.splice(lru_.begin(), lru_, it->second);
    return;
  }
  lru_.emplace_front(id, std::move(head));
  index_[id] = lru_.begin();
  if (index_.size() > capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
}

void HeadCache::erase(const ObjectKey& key) {
  if (auto it = index_.find(key.str()); it != index_.end()) {
    lru_.erase(it->second);
    index_.erase(it);
  }
}

// ---------------------------------------------------------------------------
// Manifest codec

std::string encode_manifest(const fs::SuccessManifest& manifest) {
  std::string out;
  for (const auto& [part, attempt] : manifest.committed) {
    out += part + ' ' + attempt.job_timestamp + ' ' + attempt.task_number + ' ' +
           std::to_string(attempt.attempt_number) + '\n';
  }
  return out;
}

fs::SuccessManifest decode_manifest(std::string_view body) {
  fs::SuccessManifest manifest;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < body.size()) {
    ++line_no;
    const auto end = body.find('\n', start);
    if (end == std::string_view::npos) {
      throw Error(ErrorCode::kCorruptManifest, "unterminated line " + std::to_string(line_no));
    }
    const std::string_view line = body.substr(start, end - start);
    start = end + 1;

    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto space = line.find(' ', pos);
      const auto stop = space == std::string_view::npos ? line.size() : space;
      fields.push_back(line.substr(pos, stop - pos));
      pos = stop + 1;
    }
    if (fields.size() != 4 || std::any_of(fields.begin(), fields.end(), [](auto f) { return f.empty(); })) {
      throw Error(ErrorCode::kCorruptManifest, "line " + std::to_string(line_no) + " needs 4 fields");
    }
    // Reuse the attempt-name parser so the manifest accepts exactly what the
    // final-name codec accepts.
    const std::string rendered = "attempt_" + std::string(fields[1]) + "_0000_m_" + std::string(fields[2]) + "_" +
                                 std::string(fields[3]);
    auto attempt = fs::AttemptId::parse(rendered);
    if (!attempt) throw Error(ErrorCode::kCorruptManifest, "bad attempt on line " + std::to_string(line_no));
    const std::string part(fields[0]);
    if (!manifest.committed.empty() && manifest.committed.rbegin()->first >= part) {
      throw Error(ErrorCode::kCorruptManifest, "unsorted or duplicate part '" + part + "'");
    }
    manifest.committed.emplace(part, std::move(*attempt));
  }
  return manifest;
}

// ---------------------------------------------------------------------------
// Attempt selection

std::vector<ResolvedPart> select_attempts(const std::string& container, const std::string& dataset_prefix,
                                          const std::vector<store::ListingEntry>& entries) {
  std::map<std::string, ResolvedPart> best;
  for (const auto& entry : entries) {
    if (entry.name.compare(0, dataset_prefix.size(), dataset_prefix) != 0) continue;
    const std::string leaf = entry.name.substr(dataset_prefix.size());
    if (leaf.empty() || leaf.find('/') != std::string::npos) continue;
    const auto parsed = fs::parse_final_name(leaf);
    if (!parsed || parsed->kind == fs::NameKind::kSuccessMarker) continue;

    ResolvedPart candidate{parsed->part, parsed->attempt, ObjectKey{container, entry.name}, entry.length};
    auto [it, inserted] = best.try_emplace(candidate.part, candidate);
    if (inserted) continue;
    const auto rank = [](const ResolvedPart& p) {
      return std::make_tuple(p.length, p.attempt.has_value(), p.attempt ? p.attempt->attempt_number : 0u);
    };
    if (rank(candidate) > rank(it->second)) it->second = std::move(candidate);
  }
  std::vector<ResolvedPart> out;
  out.reserve(best.size());
  for (auto& [part, resolved] : best) out.push_back(std::move(resolved));
  return out;
}

// ---------------------------------------------------------------------------
// Output stream: chunked PUT, never holds more than one chunk.

namespace {

class ChunkedOutputStream final : public fs::OutputStream {
 public:
  ChunkedOutputStream(store::ObjectStore& store, HeadCache& cache, ObjectKey key, store::Metadata metadata,
                      std::size_t chunk_size)
      : store_(store), cache_(cache), key_(key), chunk_size_(std::max<std::size_t>(chunk_size, 1)),
        put_(store.begin_put(key, std::move(metadata))) {
    buffer_.reserve(chunk_size_);
  }

  void write(std::span<const std::uint8_t> data) override {
    if (!put_.open()) throw Error(ErrorCode::kUsage, "write after close: " + key_.str());
    while (!data.empty()) {
      const std::size_t take = std::min(chunk_size_ - buffer_.size(), data.size());
      buffer_.insert(buffer_.end(), data.begin(), data.begin() + static_cast<std::ptrdiff_t>(take));
      data = data.subspan(take);
      store_.note_staged(buffer_.size());
      if (buffer_.size() == chunk_size_) flush();
    }
  }

  void close() override {
    if (!put_.open()) throw Error(ErrorCode::kUsage, "double close: " + key_.str());
    flush();
    const store::StoredObject object = put_.finish();
    cache_.put(key_, store::ObjectHead{object.metadata, object.length, object.created_at});
  }

  void abandon() override {
    buffer_.clear();
    put_.abort();
  }

 private:
  void flush() {
    if (buffer_.empty()) return;
    put_.write(buffer_);
    buffer_.clear();
  }

  store::ObjectStore& store_;
  HeadCache& cache_;
  ObjectKey key_;
  std::size_t chunk_size_;
  store::PutStream put_;
  store::Bytes buffer_;
};

fs::FileStatus status_of(const FsPath& path, const store::ObjectHead& head) {
  const bool is_dir = head.length == 0 && head.metadata.count(std::string(kMarkerKey)) > 0;
  return fs::FileStatus{path, is_dir ? 0 : head.length, is_dir, head.created_at};
}

std::string dir_prefix(const FsPath& path) { return path.is_root() ? std::string{} : path.object_name() + "/"; }

}  // namespace

// ---------------------------------------------------------------------------
// StocatorFileSystem

StocatorFileSystem::StocatorFileSystem(store::ObjectStore& store, StocatorOptions options)
    : store_(store), options_(options), cache_(options.head_cache_capacity) {}

std::optional<store::ObjectHead> StocatorFileSystem::cached_head(const ObjectKey& key) {
  if (auto hit = cache_.get(key)) return hit;
  try {
    store::ObjectHead head = store_.head_object(key);
    cache_.put(key, head);
    return head;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotFound) throw;
    return std::nullopt;
  }
}

bool StocatorFileSystem::exists(const FsPath& path) {
  if (fs::match_temp_pattern(path)) return false;
  if (path.is_root()) {
    try {
      store_.head_container(path.container());
      return true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotFound) throw;
      return false;
    }
  }
  return cached_head(path.key()).has_value();
}

fs::FileStatus StocatorFileSystem::get_file_status(const FsPath& path) {
  if (fs::match_temp_pattern(path)) throw Error(ErrorCode::kNotFound, "temporary path " + path.str());
  if (path.is_root()) {
    store_.head_container(path.container());
    return fs::FileStatus{path, 0, true, 0};
  }
  const auto head = cached_head(path.key());
  if (!head) throw Error(ErrorCode::kNotFound, path.str());
  return status_of(path, *head);
}

fs::InputData StocatorFileSystem::open(const FsPath& path) {
  // GET carries the metadata and length, so no HEAD precedes it.
  const ObjectKey key = path.key();
  store::ObjectRead read = store_.get_object(key);
  cache_.put(key, store::ObjectHead{read.metadata, read.length, read.created_at});
  return fs::InputData{std::move(read.data), std::move(read.metadata), read.length};
}

std::unique_ptr<fs::OutputStream> StocatorFileSystem::create(const FsPath& path, const fs::CreateOptions& options) {
  FsPath target = path;
  if (const auto match = fs::match_temp_pattern(path); match && match->depth == fs::TempDepth::kPartFile) {
    target = fs::final_name_for(*match);
  }
  const ObjectKey key = target.key();
  // The overwrite probe is authoritative: it never trusts a cached entry.
  bool present = false;
  try {
    cache_.put(key, store_.head_object(key));
    present = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotFound) throw;
  }
  if (present && !options.overwrite) throw Error(ErrorCode::kAlreadyExists, target.str());
  return std::make_unique<ChunkedOutputStream>(store_, cache_, key, store::Metadata{}, options_.chunk_size);
}

bool StocatorFileSystem::rename(const FsPath& src, const FsPath& dst) {
  // Output already sits under its final name.
  if (fs::match_temp_pattern(src)) return true;
  store_.copy_object(src.key(), dst.key());
  store_.delete_object(src.key());
  cache_.erase(src.key());
  return true;
}

bool StocatorFileSystem::remove(const FsPath& path, bool recursive) {
  if (const auto match = fs::match_temp_pattern(path)) {
    if (match->depth != fs::TempDepth::kPartFile) return true;
    const ObjectKey key = fs::final_name_for(*match).key();
    cache_.erase(key);
    try {
      store_.delete_object(key);
      return true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotFound) throw;
      return false;
    }
  }
  bool removed = false;
  if (!path.is_root()) {
    cache_.erase(path.key());
    try {
      store_.delete_object(path.key());
      removed = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotFound) throw;
    }
  }
  if (recursive) {
    const auto listing = store_.list_container(path.container(), dir_prefix(path));
    for (const auto& entry : listing.objects) {
      const ObjectKey key{path.container(), entry.name};
      cache_.erase(key);
      try {
        store_.delete_object(key);
        removed = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNotFound) throw;
      }
    }
  }
  return removed;
}

bool StocatorFileSystem::mkdirs(const FsPath& path) {
  if (const auto match = fs::match_temp_pattern(path)) {
    const ObjectKey marker = match->dataset.key();
    if (!cached_head(marker)) {
      store::Metadata metadata{{std::string(kMarkerKey), std::string(kMarkerValue)}};
      const auto object = store_.put_bytes(marker, {}, metadata);
      cache_.put(marker, store::ObjectHead{object.metadata, 0, object.created_at});
    }
    return true;
  }
  if (path.is_root()) return true;
  const ObjectKey key = path.key();
  if (!cached_head(key)) {
    const auto object = store_.put_bytes(key, {});
    cache_.put(key, store::ObjectHead{object.metadata, 0, object.created_at});
  }
  return true;
}

bool StocatorFileSystem::is_stocator_dataset(const FsPath& dataset) {
  if (dataset.is_root()) return false;
  const auto head = cached_head(dataset.key());
  if (!head) return false;
  const auto it = head->metadata.find(std::string(kMarkerKey));
  return it != head->metadata.end() && it->second == kMarkerValue;
}

std::vector<fs::FileStatus> StocatorFileSystem::list_literal(const FsPath& path) {
  const auto listing = store_.list_container(path.container(), dir_prefix(path), '/');
  std::vector<fs::FileStatus> out;
  for (const auto& entry : listing.objects) {
    out.push_back(fs::FileStatus{path.with_object_name(entry.name), entry.length, false, entry.created_at});
  }
  for (const auto& prefix : listing.common_prefixes) {
    out.push_back(fs::FileStatus{path.with_object_name(prefix), 0, true, 0});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.path.str() < b.path.str(); });
  return out;
}

std::vector<fs::FileStatus> StocatorFileSystem::list_status(const FsPath& path, bool /*prefix_based*/) {
  if (fs::match_temp_pattern(path)) return {};
  if (!is_stocator_dataset(path)) return list_literal(path);
  std::vector<fs::FileStatus> out;
  for (const auto& part : resolve_parts_via_listing(path)) {
    out.push_back(fs::FileStatus{path.with_object_name(part.key.name), part.length, false, 0});
  }
  return out;
}

std::vector<ResolvedPart> StocatorFileSystem::resolve_parts_via_listing(const FsPath& dataset) {
  // No _SUCCESS: the job did not complete.
  if (!cached_head(dataset.child(fs::kSuccessName).key())) return {};
  const std::string prefix = dir_prefix(dataset);
  const auto listing = store_.list_container(dataset.container(), prefix, '/');
  return select_attempts(dataset.container(), prefix, listing.objects);
}

std::vector<ResolvedPart> StocatorFileSystem::resolve_manifest_entries(const FsPath& dataset) {
  const ObjectKey success = dataset.child(fs::kSuccessName).key();
  const store::ObjectRead read = store_.get_object(success);
  cache_.put(success, store::ObjectHead{read.metadata, read.length, read.created_at});
  const std::string_view body(reinterpret_cast<const char*>(read.data->data()), read.data->size());
  const fs::SuccessManifest manifest = decode_manifest(body);
  std::vector<ResolvedPart> out;
  out.reserve(manifest.committed.size());
  for (const auto& [part, attempt] : manifest.committed) {
    const FsPath name = dataset.child(fs::final_object_leaf(part, attempt));
    out.push_back(ResolvedPart{part, attempt, name.key(), 0});
  }
  return out;
}

std::vector<ObjectKey> StocatorFileSystem::resolve_parts_via_manifest(const FsPath& dataset) {
  std::vector<ObjectKey> keys;
  for (auto& part : resolve_manifest_entries(dataset)) keys.push_back(std::move(part.key));
  return keys;
}

void StocatorFileSystem::write_success(const FsPath& dataset, const fs::SuccessManifest* manifest) {
  auto out = create(dataset.child(fs::kSuccessName), fs::CreateOptions{});
  if (manifest != nullptr) {
    const std::string body = encode_manifest(*manifest);
    out->write(std::span(reinterpret_cast<const std::uint8_t*>(body.data()), body.size()));
  }
  out->close();
}

}  // namespace stolab::stocator
