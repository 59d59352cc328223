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
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stolab/fs_path.hpp"
#include "stolab/store.hpp"

namespace stolab::fs {

struct FileStatus {
  FsPath path;
  std::uint64_t length = 0;
  bool is_directory = false;
  store::Tick modification_tick = 0;

  friend bool operator==(const FileStatus&, const FileStatus&) = default;
};

// Permission, replication and block size are accepted and ignored.
struct CreateOptions {
  bool overwrite = true;
  std::uint32_t buffer_size = 4096;
  std::uint16_t replication = 1;
  std::uint64_t block_size = 128ull << 20;
  std::uint16_t permission = 0644;
};

class OutputStream {
 public:
  virtual ~OutputStream() = default;
  virtual void write(std::span<const std::uint8_t> data) = 0;
  // Publishes the object.
  virtual void close() = 0;
  // Drops the stream without publishing, as when the writer crashes.
  virtual void abandon() = 0;
};

struct InputData {
  std::shared_ptr<const store::Bytes> data;
  store::Metadata metadata;
  std::uint64_t length = 0;
};

// Parts committed by the job, keyed by part name.
struct SuccessManifest {
  std::map<std::string, AttemptId> committed;

  friend bool operator==(const SuccessManifest&, const SuccessManifest&) = default;
};

// The filesystem surface the execution engine drives. Every implementation
// routes all storage traffic through an ObjectStore, which meters it.
class FileSystem {
 public:
  virtual ~FileSystem() = default;

  virtual std::string_view scheme() const = 0;
  // True when the implementation never issues COPY for commit renames.
  virtual bool rename_free() const { return false; }

  virtual bool exists(const FsPath& path) = 0;
  virtual InputData open(const FsPath& path) = 0;
  virtual std::unique_ptr<OutputStream> create(const FsPath& path, const CreateOptions& options) = 0;
  virtual bool rename(const FsPath& src, const FsPath& dst) = 0;
  virtual bool remove(const FsPath& path, bool recursive) = 0;
  virtual std::vector<FileStatus> list_status(const FsPath& path) = 0;
  virtual bool mkdirs(const FsPath& path) = 0;
  virtual FileStatus get_file_status(const FsPath& path) = 0;

  // Writes <dataset>/_SUCCESS. The default ignores the manifest and writes an
  // empty object through create().
  virtual void write_success(const FsPath& dataset, const SuccessManifest* manifest);

  std::unique_ptr<OutputStream> create(const FsPath& path) { return create(path, CreateOptions{}); }
};

}  // namespace stolab::fs
