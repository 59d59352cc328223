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

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stolab::store {

using Tick = std::uint64_t;
using Bytes = std::vector<std::uint8_t>;
using Metadata = std::map<std::string, std::string>;

struct ObjectKey {
  std::string container;
  std::string name;

  std::string str() const { return container + "/" + name; }

  friend auto operator<=>(const ObjectKey&, const ObjectKey&) = default;
};

// Throws Error(kUsage) on an empty container or name.
void validate(const ObjectKey& key);

enum class RestOpKind : std::uint8_t {
  kPutObject,
  kGetObject,
  kHeadObject,
  kGetContainer,
  kHeadContainer,
  kDeleteObject,
  kCopyObject,
};

inline constexpr std::array<RestOpKind, 7> kAllOpKinds = {
    RestOpKind::kPutObject,    RestOpKind::kGetObject,     RestOpKind::kHeadObject,
    RestOpKind::kGetContainer, RestOpKind::kHeadContainer, RestOpKind::kDeleteObject,
    RestOpKind::kCopyObject,
};

std::string_view to_string(RestOpKind kind);
std::optional<RestOpKind> parse_op_kind(std::string_view text);

struct OpTally {
  std::array<std::uint64_t, kAllOpKinds.size()> counts{};
  std::uint64_t bytes_put = 0;
  std::uint64_t bytes_got = 0;
  std::uint64_t bytes_copied = 0;
  std::uint64_t peak_staged = 0;

  std::uint64_t count(RestOpKind kind) const { return counts[static_cast<std::size_t>(kind)]; }
  std::uint64_t& count(RestOpKind kind) { return counts[static_cast<std::size_t>(kind)]; }
  std::uint64_t total() const;

  friend bool operator==(const OpTally&, const OpTally&) = default;
};

struct ConsistencyPolicy {
  Tick create_listing_lag = 0;
  Tick delete_listing_lag = 0;
  // Governs GET/HEAD visibility of newly created keys only. Replacements and
  // deletes are always visible to GET/HEAD immediately.
  bool read_after_write_strong = true;
};

struct StoredObject {
  ObjectKey key;
  std::shared_ptr<const Bytes> data;
  Metadata metadata;
  std::uint64_t length = 0;
  Tick created_at = 0;
  std::optional<Tick> deleted_at;
};

struct ListingEntry {
  std::string name;
  std::uint64_t length = 0;
  Tick created_at = 0;

  friend bool operator==(const ListingEntry&, const ListingEntry&) = default;
};

struct Listing {
  std::vector<ListingEntry> objects;
  std::vector<std::string> common_prefixes;

  friend bool operator==(const Listing&, const Listing&) = default;
};

struct ObjectRead {
  std::shared_ptr<const Bytes> data;
  Metadata metadata;
  std::uint64_t length = 0;
  Tick created_at = 0;
};

struct ObjectHead {
  Metadata metadata;
  std::uint64_t length = 0;
  Tick created_at = 0;

  friend bool operator==(const ObjectHead&, const ObjectHead&) = default;
};

struct ContainerInfo {
  std::string container;
  std::uint64_t object_count = 0;
};

// One record per store API call, successful or not. `src` is set for copies.
struct StoreEvent {
  Tick tick = 0;
  RestOpKind kind = RestOpKind::kPutObject;
  std::string container;
  std::string name;
  std::uint64_t length = 0;
  std::string src;

  friend bool operator==(const StoreEvent&, const StoreEvent&) = default;
};

class ObjectStore;

// A PUT whose body arrives in chunks. Nothing is visible until finish();
// destroying an unfinished stream discards it.
class PutStream {
 public:
  PutStream(PutStream&&) noexcept;
  PutStream& operator=(PutStream&&) noexcept;
  PutStream(const PutStream&) = delete;
  PutStream& operator=(const PutStream&) = delete;
  ~PutStream();

  void write(std::span<const std::uint8_t> chunk);
  StoredObject finish();
  void abort();

  std::uint64_t bytes_written() const { return body_ ? body_->size() : 0; }
  bool open() const { return store_ != nullptr && !done_; }

 private:
  friend class ObjectStore;
  PutStream(ObjectStore* store, ObjectKey key, Metadata metadata);

  ObjectStore* store_ = nullptr;
  ObjectKey key_;
  Metadata metadata_;
  std::shared_ptr<Bytes> body_;
  bool done_ = false;
};

// Multi-part upload: each part is its own PutObject request; complete()
// publishes the assembled object atomically.
class MultipartUpload {
 public:
  MultipartUpload(MultipartUpload&&) noexcept;
  MultipartUpload& operator=(MultipartUpload&&) noexcept;
  MultipartUpload(const MultipartUpload&) = delete;
  MultipartUpload& operator=(const MultipartUpload&) = delete;
  ~MultipartUpload() = default;

  void upload_part(std::span<const std::uint8_t> part);
  StoredObject complete();

  std::size_t parts_uploaded() const { return parts_; }

 private:
  friend class ObjectStore;
  MultipartUpload(ObjectStore* store, ObjectKey key, Metadata metadata);

  ObjectStore* store_ = nullptr;
  ObjectKey key_;
  Metadata metadata_;
  std::shared_ptr<Bytes> body_;
  std::size_t parts_ = 0;
  bool done_ = false;
};

class ObjectStore {
 public:
  explicit ObjectStore(ConsistencyPolicy policy = {});

  ObjectStore(const ObjectStore&) = delete;
  ObjectStore& operator=(const ObjectStore&) = delete;

  const ConsistencyPolicy& policy() const { return policy_; }

  PutStream begin_put(const ObjectKey& key, Metadata metadata = {});
  StoredObject put_object(const ObjectKey& key, std::span<const Bytes> chunks, Metadata metadata = {});
  StoredObject put_bytes(const ObjectKey& key, std::span<const std::uint8_t> body, Metadata metadata = {});
  MultipartUpload begin_multipart(const ObjectKey& key, Metadata metadata = {});

  ObjectRead get_object(const ObjectKey& key);
  ObjectHead head_object(const ObjectKey& key);
  Listing list_container(const std::string& container, std::string_view prefix,
                         std::optional<char> delimiter = std::nullopt,
                         std::optional<Tick> now = std::nullopt);
  ContainerInfo head_container(const std::string& container);
  void delete_object(const ObjectKey& key);
  StoredObject copy_object(const ObjectKey& src, const ObjectKey& dst);

  Tick advance(Tick ticks);
  Tick now() const { return clock_; }

  OpTally snapshot_tally() const { return tally_; }
  void reset_tally() { tally_ = {}; }

  // Client-side buffering reported by connectors; keeps the running maximum.
  void note_staged(std::uint64_t bytes);

  const std::vector<StoreEvent>& trace() const { return trace_; }
  void clear_trace() { trace_.clear(); }
  void set_trace_enabled(bool enabled) { trace_enabled_ = enabled; }

  // After finalize() every write fails with kStoreClosed.
  void finalize() { closed_ = true; }
  bool closed() const { return closed_; }

 private:
  friend class PutStream;
  friend class MultipartUpload;

  StoredObject commit(const ObjectKey& key, std::shared_ptr<const Bytes> data, Metadata metadata);
  void record(RestOpKind kind, const ObjectKey& key, std::uint64_t length, std::string src = {});
  void record(RestOpKind kind, const std::string& container, const std::string& name,
              std::uint64_t length, std::string src = {});
  void check_open() const;
  const StoredObject* visible_for_read(const ObjectKey& key) const;

  ConsistencyPolicy policy_;
  Tick clock_ = 0;
  bool closed_ = false;
  bool trace_enabled_ = true;
  OpTally tally_;
  std::vector<StoreEvent> trace_;
  // Newest version last.
  std::map<ObjectKey, std::vector<StoredObject>> versions_;
};

}  // namespace stolab::store
