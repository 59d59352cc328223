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

#include "stolab/store.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

#include "stolab/error.hpp"

namespace stolab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kAlreadyExists: return "already-exists";
    case ErrorCode::kStoreClosed: return "store-closed";
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kMissingPart: return "missing-part";
    case ErrorCode::kCorruptManifest: return "corrupt-manifest";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kUnknownFormat: return "unknown-format";
  }
  return "unknown";
}

}  // namespace stolab

namespace stolab::store {

void validate(const ObjectKey& key) {
  if (key.container.empty()) throw Error(ErrorCode::kUsage, "empty container in object key");
  if (key.name.empty()) throw Error(ErrorCode::kUsage, "empty object name in " + key.container);
}

std::string_view to_string(RestOpKind kind) {
  switch (kind) {
    case RestOpKind::kPutObject: return "PutObject";
    case RestOpKind::kGetObject: return "GetObject";
    case RestOpKind::kHeadObject: return "HeadObject";
    case RestOpKind::kGetContainer: return "GetContainer";
    case RestOpKind::kHeadContainer: return "HeadContainer";
    case RestOpKind::kDeleteObject: return "DeleteObject";
    case RestOpKind::kCopyObject: return "CopyObject";
  }
  return "?";
}

std::optional<RestOpKind> parse_op_kind(std::string_view text) {
  for (RestOpKind kind : kAllOpKinds) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

std::uint64_t OpTally::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

// ---------------------------------------------------------------------------

PutStream::PutStream(ObjectStore* store, ObjectKey key, Metadata metadata)
    : store_(store), key_(std::move(key)), metadata_(std::move(metadata)),
      body_(std::make_shared<Bytes>()) {}

PutStream::PutStream(PutStream&& other) noexcept
    : store_(std::exchange(other.store_, nullptr)), key_(std::move(other.key_)),
      metadata_(std::move(other.metadata_)), body_(std::move(other.body_)),
      done_(other.done_) {}

PutStream& PutStream::operator=(PutStream&& other) noexcept {
  if (this != &other) {
    store_ = std::exchange(other.store_, nullptr);
    key_ = std::move(other.key_);
    metadata_ = std::move(other.metadata_);
    body_ = std::move(other.body_);
    done_ = other.done_;
  }
  return *this;
}

PutStream::~PutStream() = default;

void PutStream::write(std::span<const std::uint8_t> chunk) {
  if (store_ == nullptr || done_) throw Error(ErrorCode::kUsage, "write on a finished stream: " + key_.str());
  body_->insert(body_->end(), chunk.begin(), chunk.end());
}

StoredObject PutStream::finish() {
  if (store_ == nullptr || done_) throw Error(ErrorCode::kUsage, "finish on a finished stream: " + key_.str());
  done_ = true;
  ObjectStore* store = std::exchange(store_, nullptr);
  store->record(RestOpKind::kPutObject, key_, body_->size());
  store->tally_.bytes_put += body_->size();
  store->check_open();
  return store->commit(key_, std::move(body_), std::move(metadata_));
}

void PutStream::abort() {
  done_ = true;
  store_ = nullptr;
  body_.reset();
}

MultipartUpload::MultipartUpload(ObjectStore* store, ObjectKey key, Metadata metadata)
    : store_(store), key_(std::move(key)), metadata_(std::move(metadata)),
      body_(std::make_shared<Bytes>()) {}

MultipartUpload::MultipartUpload(MultipartUpload&& other) noexcept
    : store_(std::exchange(other.store_, nullptr)), key_(std::move(other.key_)),
      metadata_(std::move(other.metadata_)), body_(std::move(other.body_)),
      parts_(other.parts_), done_(other.done_) {}

MultipartUpload& MultipartUpload::operator=(MultipartUpload&& other) noexcept {
  if (this != &other) {
    store_ = std::exchange(other.store_, nullptr);
    key_ = std::move(other.key_);
    metadata_ = std::move(other.metadata_);
    body_ = std::move(other.body_);
    parts_ = other.parts_;
    done_ = other.done_;
  }
  return *this;
}

void MultipartUpload::upload_part(std::span<const std::uint8_t> part) {
  if (store_ == nullptr || done_) throw Error(ErrorCode::kUsage, "part after completion: " + key_.str());
  store_->record(RestOpKind::kPutObject, key_, part.size());
  store_->tally_.bytes_put += part.size();
  store_->check_open();
  body_->insert(body_->end(), part.begin(), part.end());
  ++parts_;
}

StoredObject MultipartUpload::complete() {
  if (store_ == nullptr || done_) throw Error(ErrorCode::kUsage, "double completion: " + key_.str());
  done_ = true;
  ObjectStore* store = std::exchange(store_, nullptr);
  store->check_open();
  return store->commit(key_, std::move(body_), std::move(metadata_));
}

// ---------------------------------------------------------------------------

ObjectStore::ObjectStore(ConsistencyPolicy policy) : policy_(policy) {}

void ObjectStore::check_open() const {
  if (closed_) throw Error(ErrorCode::kStoreClosed, "object store has been finalized");
}

void ObjectStore::record(RestOpKind kind, const ObjectKey& key, std::uint64_t length, std::string src) {
  record(kind, key.container, key.name, length, std::move(src));
}

void ObjectStore::record(RestOpKind kind, const std::string& container, const std::string& name,
                         std::uint64_t length, std::string src) {
  ++tally_.count(kind);
  if (trace_enabled_) {
    trace_.push_back(StoreEvent{clock_, kind, container, name, length, std::move(src)});
  }
}

void ObjectStore::note_staged(std::uint64_t bytes) {
  tally_.peak_staged = std::max(tally_.peak_staged, bytes);
}

PutStream ObjectStore::begin_put(const ObjectKey& key, Metadata metadata) {
  validate(key);
  check_open();
  return PutStream(this, key, std::move(metadata));
}

StoredObject ObjectStore::put_object(const ObjectKey& key, std::span<const Bytes> chunks, Metadata metadata) {
  PutStream stream = begin_put(key, std::move(metadata));
  for (const Bytes& chunk : chunks) stream.write(chunk);
  return stream.finish();
}

StoredObject ObjectStore::put_bytes(const ObjectKey& key, std::span<const std::uint8_t> body, Metadata metadata) {
  PutStream stream = begin_put(key, std::move(metadata));
  stream.write(body);
  return stream.finish();
}

MultipartUpload ObjectStore::begin_multipart(const ObjectKey& key, Metadata metadata) {
  validate(key);
  check_open();
  return MultipartUpload(this, key, std::move(metadata));
}

StoredObject ObjectStore::commit(const ObjectKey& key, std::shared_ptr<const Bytes> data, Metadata metadata) {
  StoredObject object;
  object.key = key;
  object.length = data->size();
  object.data = std::move(data);
  object.metadata = std::move(metadata);
  object.created_at = clock_;
  versions_[key].push_back(object);
  return object;
}

const StoredObject* ObjectStore::visible_for_read(const ObjectKey& key) const {
  auto it = versions_.find(key);
  if (it == versions_.end() || it->second.empty()) return nullptr;
  const auto& history = it->second;
  const StoredObject& newest = history.back();
  if (newest.deleted_at) return nullptr;
  if (policy_.read_after_write_strong) return &newest;
  if (newest.created_at + policy_.create_listing_lag <= clock_) return &newest;
  // An update of a live key is visible at once; only fresh creates lag.
  if (history.size() >= 2 && !history[history.size() - 2].deleted_at) return &newest;
  return nullptr;
}

ObjectRead ObjectStore::get_object(const ObjectKey& key) {
  record(RestOpKind::kGetObject, key, 0);
  const StoredObject* object = visible_for_read(key);
  if (object == nullptr) throw Error(ErrorCode::kNotFound, "GET " + key.str());
  tally_.bytes_got += object->length;
  if (trace_enabled_) trace_.back().length = object->length;
  return ObjectRead{object->data, object->metadata, object->length, object->created_at};
}

ObjectHead ObjectStore::head_object(const ObjectKey& key) {
  record(RestOpKind::kHeadObject, key, 0);
  const StoredObject* object = visible_for_read(key);
  if (object == nullptr) throw Error(ErrorCode::kNotFound, "HEAD " + key.str());
  return ObjectHead{object->metadata, object->length, object->created_at};
}

Listing ObjectStore::list_container(const std::string& container, std::string_view prefix,
                                    std::optional<char> delimiter, std::optional<Tick> now) {
  record(RestOpKind::kGetContainer, container, std::string(prefix), 0);
  const Tick at = now.value_or(clock_);
  Listing listing;
  std::set<std::string> prefixes;
  auto it = versions_.lower_bound(ObjectKey{container, std::string(prefix)});
  for (; it != versions_.end() && it->first.container == container; ++it) {
    const std::string& name = it->first.name;
    if (name.compare(0, prefix.size(), prefix) != 0) break;
    // The newest version whose creation has propagated decides the entry.
    const StoredObject* view = nullptr;
    for (auto v = it->second.rbegin(); v != it->second.rend(); ++v) {
      if (v->created_at + policy_.create_listing_lag <= at) {
        view = &*v;
        break;
      }
    }
    if (view == nullptr) continue;
    if (view->deleted_at && *view->deleted_at + policy_.delete_listing_lag <= at) continue;
    if (delimiter) {
      const auto cut = name.find(*delimiter, prefix.size());
      if (cut != std::string::npos) {
        prefixes.insert(name.substr(0, cut + 1));
        continue;
      }
    }
    listing.objects.push_back(ListingEntry{name, view->length, view->created_at});
  }
  listing.common_prefixes.assign(prefixes.begin(), prefixes.end());
  return listing;
}

ContainerInfo ObjectStore::head_container(const std::string& container) {
  record(RestOpKind::kHeadContainer, container, std::string{}, 0);
  ContainerInfo info{container, 0};
  bool exists = false;
  for (auto it = versions_.lower_bound(ObjectKey{container, std::string{}});
       it != versions_.end() && it->first.container == container; ++it) {
    exists = true;
    if (!it->second.back().deleted_at) ++info.object_count;
  }
  if (!exists) throw Error(ErrorCode::kNotFound, "HEAD container " + container);
  return info;
}

void ObjectStore::delete_object(const ObjectKey& key) {
  record(RestOpKind::kDeleteObject, key, 0);
  check_open();
  auto it = versions_.find(key);
  if (it == versions_.end() || it->second.back().deleted_at) {
    throw Error(ErrorCode::kNotFound, "DELETE " + key.str());
  }
  it->second.back().deleted_at = clock_;
}

StoredObject ObjectStore::copy_object(const ObjectKey& src, const ObjectKey& dst) {
  record(RestOpKind::kCopyObject, dst, 0, src.str());
  validate(dst);
  check_open();
  const StoredObject* source = visible_for_read(src);
  if (source == nullptr) throw Error(ErrorCode::kNotFound, "COPY source " + src.str());
  tally_.bytes_copied += source->length;
  if (trace_enabled_) trace_.back().length = source->length;
  // Copy the handles first: commit() may reallocate the version vector.
  auto data = source->data;
  auto metadata = source->metadata;
  return commit(dst, std::move(data), std::move(metadata));
}

Tick ObjectStore::advance(Tick ticks) {
  clock_ += ticks;
  return clock_;
}

}  // namespace stolab::store
