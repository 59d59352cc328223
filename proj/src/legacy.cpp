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

#include "stolab/legacy.hpp"

#include <algorithm>
#include <deque>

#include "stolab/error.hpp"

namespace stolab::legacy {

using fs::FsPath;
using store::ObjectKey;

namespace {

std::string dir_prefix(const FsPath& path) { return path.is_root() ? std::string{} : path.object_name() + "/"; }

ObjectKey marker_key(const FsPath& path) { return ObjectKey{path.container(), dir_prefix(path)}; }

bool is_not_found(const Error& e) { return e.code() == ErrorCode::kNotFound; }

// Default mode: the whole body is staged locally, then sent in one PUT.
class StagingOutputStream final : public fs::OutputStream {
 public:
  StagingOutputStream(store::ObjectStore& store, ObjectKey key) : store_(store), key_(std::move(key)) {}

  void write(std::span<const std::uint8_t> data) override {
    if (closed_) throw Error(ErrorCode::kUsage, "write after close: " + key_.str());
    staged_.insert(staged_.end(), data.begin(), data.end());
    store_.note_staged(staged_.size());
  }

  void close() override {
    if (closed_) throw Error(ErrorCode::kUsage, "double close: " + key_.str());
    closed_ = true;
    store_.put_bytes(key_, staged_);
    staged_.clear();
  }

  void abandon() override {
    closed_ = true;
    staged_.clear();
  }

 private:
  store::ObjectStore& store_;
  ObjectKey key_;
  store::Bytes staged_;
  bool closed_ = false;
};

// Fast upload: one multipart part per filled buffer.
class MultipartOutputStream final : public fs::OutputStream {
 public:
  MultipartOutputStream(store::ObjectStore& store, ObjectKey key, std::uint64_t part_size)
      : store_(store), upload_(store.begin_multipart(key)), key_(std::move(key)), part_size_(part_size) {}

  void write(std::span<const std::uint8_t> data) override {
    if (closed_) throw Error(ErrorCode::kUsage, "write after close: " + key_.str());
    while (!data.empty()) {
      const auto take = static_cast<std::size_t>(std::min<std::uint64_t>(part_size_ - buffer_.size(), data.size()));
      buffer_.insert(buffer_.end(), data.begin(), data.begin() + static_cast<std::ptrdiff_t>(take));
      data = data.subspan(take);
      store_.note_staged(buffer_.size());
      if (buffer_.size() == part_size_) {
        upload_.upload_part(buffer_);
        buffer_.clear();
      }
    }
  }

  void close() override {
    if (closed_) throw Error(ErrorCode::kUsage, "double close: " + key_.str());
    closed_ = true;
    if (!buffer_.empty() || upload_.parts_uploaded() == 0) upload_.upload_part(buffer_);
    buffer_.clear();
    upload_.complete();
  }

  void abandon() override {
    closed_ = true;
    buffer_.clear();
  }

 private:
  store::ObjectStore& store_;
  store::MultipartUpload upload_;
  ObjectKey key_;
  std::uint64_t part_size_;
  store::Bytes buffer_;
  bool closed_ = false;
};

}  // namespace

LegacyProfile LegacyProfile::swift_like() { return LegacyProfile{}; }

LegacyProfile LegacyProfile::s3a_like() {
  LegacyProfile profile;
  profile.name = "s3a-like";
  profile.dir_probe_heads = 2;
  profile.listing_per_level = false;
  return profile;
}

void LegacyProfile::validate() const {
  if (fast_upload && fast_upload_part_size < kMinMultipartPartSize) {
    throw Error(ErrorCode::kConfig, "fast upload part size " + std::to_string(fast_upload_part_size) +
                                        " is below the 5 MiB multipart minimum");
  }
}

LegacyFileSystem::LegacyFileSystem(store::ObjectStore& store, LegacyProfile profile)
    : store_(store), profile_(std::move(profile)),
      scheme_(profile_.name.starts_with("s3a") ? "s3a" : "swift") {
  profile_.validate();
}

bool LegacyFileSystem::marker_present(const ObjectKey& marker, unsigned probes) {
  bool found = false;
  for (unsigned i = 0; i < std::max(probes, 1u); ++i) {
    try {
      store_.head_object(marker);
      found = true;
    } catch (const Error& e) {
      if (!is_not_found(e)) throw;
    }
  }
  return found;
}

fs::FileStatus LegacyFileSystem::get_file_status(const FsPath& path) {
  if (path.is_root()) {
    store_.head_container(path.container());
    return fs::FileStatus{path, 0, true, 0};
  }
  try {
    const auto head = store_.head_object(path.key());
    return fs::FileStatus{path, head.length, false, head.created_at};
  } catch (const Error& e) {
    if (!is_not_found(e)) throw;
  }
  try {
    const auto head = store_.head_object(marker_key(path));
    return fs::FileStatus{path, 0, true, head.created_at};
  } catch (const Error& e) {
    if (!is_not_found(e)) throw;
  }
  // A directory may exist only implicitly, through its children.
  const auto listing = store_.list_container(path.container(), dir_prefix(path), '/');
  if (!listing.objects.empty() || !listing.common_prefixes.empty()) return fs::FileStatus{path, 0, true, 0};
  throw Error(ErrorCode::kNotFound, path.str());
}

bool LegacyFileSystem::exists(const FsPath& path) {
  try {
    get_file_status(path);
    return true;
  } catch (const Error& e) {
    if (!is_not_found(e)) throw;
    return false;
  }
}

fs::InputData LegacyFileSystem::open(const FsPath& path) {
  // Metadata first, then data: two requests per open.
  store_.head_object(path.key());
  store::ObjectRead read = store_.get_object(path.key());
  return fs::InputData{std::move(read.data), std::move(read.metadata), read.length};
}

bool LegacyFileSystem::mkdirs(const FsPath& path) {
  FsPath level(path.scheme(), path.container(), {}, path.service());
  for (const auto& segment : path.segments()) {
    level = level.child(segment);
    const ObjectKey marker = marker_key(level);
    if (!marker_present(marker, profile_.dir_probe_heads)) store_.put_bytes(marker, {});
  }
  return true;
}

std::unique_ptr<fs::OutputStream> LegacyFileSystem::create(const FsPath& path, const fs::CreateOptions& options) {
  if (path.is_root()) throw Error(ErrorCode::kUsage, "cannot create the container root");
  try {
    const auto status = get_file_status(path);
    if (status.is_directory || !options.overwrite) throw Error(ErrorCode::kAlreadyExists, path.str());
  } catch (const Error& e) {
    if (!is_not_found(e)) throw;
  }
  if (!path.parent().is_root()) mkdirs(path.parent());
  if (profile_.fast_upload) {
    return std::make_unique<MultipartOutputStream>(store_, path.key(), profile_.fast_upload_part_size);
  }
  return std::make_unique<StagingOutputStream>(store_, path.key());
}

std::vector<store::ListingEntry> LegacyFileSystem::list_tree(const FsPath& dir) {
  if (!profile_.listing_per_level) {
    return store_.list_container(dir.container(), dir_prefix(dir)).objects;
  }
  std::vector<store::ListingEntry> out;
  std::deque<std::string> pending{dir_prefix(dir)};
  while (!pending.empty()) {
    const std::string prefix = pending.front();
    pending.pop_front();
    auto listing = store_.list_container(dir.container(), prefix, '/');
    for (auto& entry : listing.objects) out.push_back(std::move(entry));
    for (auto& sub : listing.common_prefixes) pending.push_back(std::move(sub));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

std::vector<fs::FileStatus> LegacyFileSystem::list_status(const FsPath& path) {
  const auto status = get_file_status(path);
  if (!status.is_directory) return {status};
  const std::string prefix = dir_prefix(path);
  const auto listing = store_.list_container(path.container(), prefix, '/');
  std::vector<fs::FileStatus> out;
  for (const auto& entry : listing.objects) {
    if (entry.name == prefix) continue;  // the directory's own marker
    out.push_back(fs::FileStatus{path.with_object_name(entry.name), entry.length, false, entry.created_at});
  }
  for (const auto& sub : listing.common_prefixes) {
    out.push_back(fs::FileStatus{path.with_object_name(sub), 0, true, 0});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.path.str() < b.path.str(); });
  return out;
}

bool LegacyFileSystem::rename(const FsPath& src, const FsPath& dst) {
  const auto status = get_file_status(src);
  if (!dst.parent().is_root()) mkdirs(dst.parent());
  if (!status.is_directory) {
    store_.copy_object(src.key(), dst.key());
    store_.delete_object(src.key());
    return true;
  }
  const std::string from = dir_prefix(src);
  const std::string to = dir_prefix(dst);
  for (const auto& entry : list_tree(src)) {
    const ObjectKey old_key{src.container(), entry.name};
    const ObjectKey new_key{dst.container(), to + entry.name.substr(from.size())};
    store_.copy_object(old_key, new_key);
    store_.delete_object(old_key);
  }
  return true;
}

bool LegacyFileSystem::remove(const FsPath& path, bool recursive) {
  if (path.is_root()) throw Error(ErrorCode::kUsage, "refusing to delete a container root");
  fs::FileStatus status;
  try {
    status = get_file_status(path);
  } catch (const Error& e) {
    if (!is_not_found(e)) throw;
    return false;
  }
  auto delete_quietly = [this](const ObjectKey& key) {
    try {
      store_.delete_object(key);
    } catch (const Error& e) {
      if (!is_not_found(e)) throw;
    }
  };
  if (!status.is_directory) {
    delete_quietly(path.key());
    return true;
  }
  if (recursive) {
    for (const auto& entry : list_tree(path)) delete_quietly(ObjectKey{path.container(), entry.name});
  } else {
    delete_quietly(marker_key(path));
  }
  return true;
}

}  // namespace stolab::legacy
