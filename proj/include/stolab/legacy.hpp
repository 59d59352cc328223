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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stolab/filesystem.hpp"
#include "stolab/store.hpp"

namespace stolab::legacy {

inline constexpr std::uint64_t kMinMultipartPartSize = 5ull * 1024 * 1024;

// Knobs that distinguish the rename-based connectors. Directories are
// zero-byte objects whose name ends in '/'.
struct LegacyProfile {
  std::string name = "swift-like";
  // HEAD requests issued against each directory level during mkdirs.
  unsigned dir_probe_heads = 1;
  // Recursive listings descend one GetContainer per directory; otherwise a
  // single flat prefix listing is used.
  bool listing_per_level = true;
  bool fast_upload = false;
  std::uint64_t fast_upload_part_size = kMinMultipartPartSize;

  static LegacyProfile swift_like();
  static LegacyProfile s3a_like();

  // Throws Error(kConfig) when fast upload parts are below the multipart minimum.
  void validate() const;
};

class LegacyFileSystem final : public fs::FileSystem {
 public:
  LegacyFileSystem(store::ObjectStore& store, LegacyProfile profile);

  using fs::FileSystem::create;

  std::string_view scheme() const override { return scheme_; }

  bool exists(const fs::FsPath& path) override;
  fs::InputData open(const fs::FsPath& path) override;
  std::unique_ptr<fs::OutputStream> create(const fs::FsPath& path, const fs::CreateOptions& options) override;
  bool rename(const fs::FsPath& src, const fs::FsPath& dst) override;
  bool remove(const fs::FsPath& path, bool recursive) override;
  std::vector<fs::FileStatus> list_status(const fs::FsPath& path) override;
  bool mkdirs(const fs::FsPath& path) override;
  fs::FileStatus get_file_status(const fs::FsPath& path) override;

  // Every object beneath `dir`, markers included, in name order.
  std::vector<store::ListingEntry> list_tree(const fs::FsPath& dir);

  const LegacyProfile& profile() const { return profile_; }

 private:
  bool marker_present(const store::ObjectKey& marker, unsigned probes);

  store::ObjectStore& store_;
  LegacyProfile profile_;
  std::string scheme_;
};

}  // namespace stolab::legacy
