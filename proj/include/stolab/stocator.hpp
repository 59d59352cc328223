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

#include <cstddef>
#include <list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stolab/filesystem.hpp"
#include "stolab/store.hpp"

namespace stolab::stocator {

// Metadata placed on the zero-byte dataset marker.
inline constexpr std::string_view kMarkerKey = "written-by";
inline constexpr std::string_view kMarkerValue = "stocator";

inline constexpr std::size_t kDefaultChunkSize = 8 * 1024;
inline constexpr std::size_t kDefaultHeadCacheCapacity = 1024;

enum class ReadOption {
  kListing,   // list the dataset and keep the largest attempt per part
  kManifest,  // rebuild part names from the manifest in _SUCCESS
};

std::string_view to_string(ReadOption option);
std::optional<ReadOption> parse_read_option(std::string_view text);

// LRU map of HEAD results. Input datasets are immutable while a job runs, so
// entries are only dropped by eviction or by this connector's own deletes.
class HeadCache {
 public:
  explicit HeadCache(std::size_t capacity = kDefaultHeadCacheCapacity);

  std::optional<store::ObjectHead> get(const store::ObjectKey& key);
  void put(const store::ObjectKey& key, store::ObjectHead head);
  void erase(const store::ObjectKey& key);

  std::size_t size() const { return index_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

 private:
  using Entry = std::pair<std::string, store::ObjectHead>;

  std::size_t capacity_;
  std::list<Entry> lru_;  // most recent first
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

// One line per committed part, sorted by part:
//   <part> <job_timestamp> <task_number> <attempt_number>\n
std::string encode_manifest(const fs::SuccessManifest& manifest);
// Throws Error(kCorruptManifest) on anything encode_manifest cannot produce.
fs::SuccessManifest decode_manifest(std::string_view body);

// A part chosen for reading, with the object that backs it.
struct ResolvedPart {
  std::string part;
  std::optional<fs::AttemptId> attempt;
  store::ObjectKey key;
  std::uint64_t length = 0;

  friend bool operator==(const ResolvedPart&, const ResolvedPart&) = default;
};

// Picks one object per part: most bytes first, then highest attempt number.
std::vector<ResolvedPart> select_attempts(const std::string& container, const std::string& dataset_prefix,
                                          const std::vector<store::ListingEntry>& entries);

struct StocatorOptions {
  std::size_t chunk_size = kDefaultChunkSize;
  std::size_t head_cache_capacity = kDefaultHeadCacheCapacity;
};

class StocatorFileSystem final : public fs::FileSystem {
 public:
  explicit StocatorFileSystem(store::ObjectStore& store, StocatorOptions options = {});

  using fs::FileSystem::create;

  std::string_view scheme() const override { return "swift2d"; }
  bool rename_free() const override { return true; }

  bool exists(const fs::FsPath& path) override;
  fs::InputData open(const fs::FsPath& path) override;
  std::unique_ptr<fs::OutputStream> create(const fs::FsPath& path, const fs::CreateOptions& options) override;
  bool rename(const fs::FsPath& src, const fs::FsPath& dst) override;
  bool remove(const fs::FsPath& path, bool recursive) override;
  std::vector<fs::FileStatus> list_status(const fs::FsPath& path) override { return list_status(path, false); }
  // `prefix_based` is accepted for interface parity and behaves like a normal listing.
  std::vector<fs::FileStatus> list_status(const fs::FsPath& path, bool prefix_based);
  bool mkdirs(const fs::FsPath& path) override;
  fs::FileStatus get_file_status(const fs::FsPath& path) override;
  void write_success(const fs::FsPath& dataset, const fs::SuccessManifest* manifest) override;

  // True when the dataset marker exists and carries the Stocator metadata.
  bool is_stocator_dataset(const fs::FsPath& dataset);
  // Listing-based resolution. Empty when _SUCCESS is absent.
  std::vector<ResolvedPart> resolve_parts_via_listing(const fs::FsPath& dataset);
  // Manifest-based resolution; never lists the container.
  std::vector<store::ObjectKey> resolve_parts_via_manifest(const fs::FsPath& dataset);
  std::vector<ResolvedPart> resolve_manifest_entries(const fs::FsPath& dataset);

  const HeadCache& head_cache() const { return cache_; }
  const StocatorOptions& options() const { return options_; }

 private:
  std::optional<store::ObjectHead> cached_head(const store::ObjectKey& key);
  std::vector<fs::FileStatus> list_literal(const fs::FsPath& path);

  store::ObjectStore& store_;
  StocatorOptions options_;
  HeadCache cache_;
};

}  // namespace stolab::stocator
