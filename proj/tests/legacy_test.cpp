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

#include <gtest/gtest.h>

#include "stolab/error.hpp"
#include "test_util.hpp"

namespace stolab::legacy {
namespace {

using fs::FsPath;
using store::ObjectStore;
using store::RestOpKind;
using testing::count_events;
using testing::names;
using testing::view;

const FsPath kRoot = FsPath::parse("swift://res");

void write(fs::FileSystem& fs, const FsPath& path, std::string_view body) {
  auto out = fs.create(path);
  out->write(view(body));
  out->close();
}

TEST(Profile, Presets) {
  const auto swift = LegacyProfile::swift_like();
  EXPECT_EQ(swift.dir_probe_heads, 1u);
  EXPECT_TRUE(swift.listing_per_level);
  const auto s3a = LegacyProfile::s3a_like();
  EXPECT_EQ(s3a.dir_probe_heads, 2u);
  EXPECT_FALSE(s3a.listing_per_level);
  EXPECT_FALSE(s3a.fast_upload);
}

TEST(Profile, FastUploadPartSizeFloor) {
  auto p = LegacyProfile::s3a_like();
  p.fast_upload = true;
  p.fast_upload_part_size = kMinMultipartPartSize - 1;
  EXPECT_THROW(p.validate(), Error);
  ObjectStore s;
  EXPECT_THROW(LegacyFileSystem(s, p), Error);
  p.fast_upload_part_size = kMinMultipartPartSize;
  EXPECT_NO_THROW(p.validate());
  p.fast_upload = false;
  p.fast_upload_part_size = 1;
  EXPECT_NO_THROW(p.validate());
}

TEST(Legacy, MkdirsWritesOneMarkerPerLevel) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  fs.mkdirs(kRoot.child("a").child("b").child("c"));
  EXPECT_EQ(names(s.list_container("res", "")), (std::vector<std::string>{"a/", "a/b/", "a/b/c/"}));
  EXPECT_EQ(s.snapshot_tally().count(RestOpKind::kHeadObject), 3u);
  EXPECT_EQ(s.snapshot_tally().count(RestOpKind::kPutObject), 3u);
  s.reset_tally();
  fs.mkdirs(kRoot.child("a").child("b").child("c"));
  EXPECT_EQ(s.snapshot_tally().count(RestOpKind::kPutObject), 0u);
  EXPECT_EQ(s.snapshot_tally().count(RestOpKind::kHeadObject), 3u);
}

TEST(Legacy, S3aProbesEachLevelTwice) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::s3a_like());
  fs.mkdirs(kRoot.child("a").child("b"));
  EXPECT_EQ(s.snapshot_tally().count(RestOpKind::kHeadObject), 4u);
  EXPECT_EQ(s.snapshot_tally().count(RestOpKind::kPutObject), 2u);
}

TEST(Legacy, FileStatusForFileDirectoryImplicitAndMissing) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  s.put_bytes({"res", "file"}, view("abc"));
  s.put_bytes({"res", "dir/"}, {});
  s.put_bytes({"res", "implicit/child"}, view("x"));
  const auto f = fs.get_file_status(kRoot.child("file"));
  EXPECT_FALSE(f.is_directory);
  EXPECT_EQ(f.length, 3u);
  EXPECT_TRUE(fs.get_file_status(kRoot.child("dir")).is_directory);
  EXPECT_TRUE(fs.get_file_status(kRoot.child("implicit")).is_directory);
  EXPECT_THROW(fs.get_file_status(kRoot.child("missing")), Error);
  EXPECT_FALSE(fs.exists(kRoot.child("missing")));
  EXPECT_TRUE(fs.exists(kRoot));
}

TEST(Legacy, StatusThenOpenIsTwoHeadsOneGet) {
  ObjectStore s;
  s.put_bytes({"res", "input/part-0"}, view("payload"));
  s.reset_tally();
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  const auto path = kRoot.child("input").child("part-0");
  fs.get_file_status(path);
  EXPECT_EQ(testing::text(*fs.open(path).data), "payload");
  const auto t = s.snapshot_tally();
  EXPECT_EQ(t.count(RestOpKind::kHeadObject), 2u);
  EXPECT_EQ(t.count(RestOpKind::kGetObject), 1u);
  EXPECT_EQ(t.total(), 3u);
}

TEST(Legacy, CreateStagesWholeBody) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  const store::Bytes body(12u << 20, 7);
  auto out = fs.create(kRoot.child("d").child("big"));
  out->write(body);
  EXPECT_TRUE(s.list_container("res", "d/big").objects.empty());
  out->close();
  EXPECT_EQ(s.snapshot_tally().peak_staged, body.size());
  EXPECT_EQ(count_events(s.trace(), RestOpKind::kPutObject, "d/big"), 1u);
  EXPECT_THROW(out->close(), Error);
}

TEST(Legacy, FastUploadSendsBoundedParts) {
  ObjectStore s;
  auto profile = LegacyProfile::s3a_like();
  profile.fast_upload = true;
  LegacyFileSystem fs(s, profile);
  const store::Bytes body(12u << 20, 3);
  auto out = fs.create(kRoot.child("big"));
  for (std::size_t off = 0; off < body.size(); off += 1u << 20) {
    out->write(std::span(body).subspan(off, 1u << 20));
  }
  out->close();
  EXPECT_EQ(count_events(s.trace(), RestOpKind::kPutObject, "big"), 3u);
  EXPECT_LE(s.snapshot_tally().peak_staged, kMinMultipartPartSize);
  EXPECT_EQ(s.get_object({"res", "big"}).length, body.size());
}

TEST(Legacy, FastUploadOfEmptyFileStillPublishes) {
  ObjectStore s;
  auto profile = LegacyProfile::s3a_like();
  profile.fast_upload = true;
  LegacyFileSystem fs(s, profile);
  fs.create(kRoot.child("empty"))->close();
  EXPECT_EQ(s.get_object({"res", "empty"}).length, 0u);
}

TEST(Legacy, AbandonedStreamsPublishNothing) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  auto out = fs.create(kRoot.child("f"));
  out->write(view("abc"));
  out->abandon();
  EXPECT_FALSE(fs.exists(kRoot.child("f")));
}

TEST(Legacy, CreateRefusesDirectoriesAndExistingWithoutOverwrite) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  fs.mkdirs(kRoot.child("dir"));
  EXPECT_THROW(fs.create(kRoot.child("dir")), Error);
  write(fs, kRoot.child("file"), "1");
  fs::CreateOptions opts;
  opts.overwrite = false;
  EXPECT_THROW(fs.create(kRoot.child("file"), opts), Error);
  EXPECT_NO_THROW(fs.create(kRoot.child("file")));
  EXPECT_THROW(fs.create(kRoot), Error);
}

TEST(Legacy, RenameFileIsCopyPlusDelete) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  write(fs, kRoot.child("a").child("f"), "abc");
  s.reset_tally();
  fs.rename(kRoot.child("a").child("f"), kRoot.child("b").child("g"));
  EXPECT_EQ(s.snapshot_tally().count(RestOpKind::kCopyObject), 1u);
  EXPECT_EQ(s.snapshot_tally().count(RestOpKind::kDeleteObject), 1u);
  EXPECT_EQ(s.snapshot_tally().bytes_copied, 3u);
  EXPECT_EQ(testing::text(*s.get_object({"res", "b/g"}).data), "abc");
  EXPECT_THROW(s.head_object({"res", "a/f"}), Error);
}

TEST(Legacy, RenameDirectoryMovesEveryObject) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  write(fs, kRoot.child("src").child("x"), "1");
  write(fs, kRoot.child("src").child("sub").child("y"), "22");
  fs.rename(kRoot.child("src"), kRoot.child("dst"));
  EXPECT_EQ(names(s.list_container("res", "")),
            (std::vector<std::string>{"dst/", "dst/sub/", "dst/sub/y", "dst/x"}));
}

TEST(Legacy, RenameMissingSourceFails) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  EXPECT_THROW(fs.rename(kRoot.child("nope"), kRoot.child("x")), Error);
}

TEST(Legacy, RemoveRecursiveAndNonRecursive) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  write(fs, kRoot.child("d").child("a"), "1");
  write(fs, kRoot.child("d").child("e").child("b"), "1");
  EXPECT_TRUE(fs.remove(kRoot.child("d").child("a"), false));
  EXPECT_TRUE(fs.remove(kRoot.child("d"), true));
  EXPECT_TRUE(s.list_container("res", "").objects.empty());
  EXPECT_FALSE(fs.remove(kRoot.child("d"), true));
  EXPECT_THROW(fs.remove(kRoot, true), Error);
}

TEST(Legacy, ListStatusHidesOwnMarker) {
  ObjectStore s;
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  write(fs, kRoot.child("d").child("a"), "1");
  fs.mkdirs(kRoot.child("d").child("sub"));
  const auto out = fs.list_status(kRoot.child("d"));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].path.object_name(), "d/a");
  EXPECT_FALSE(out[0].is_directory);
  EXPECT_EQ(out[1].path.object_name(), "d/sub");
  EXPECT_TRUE(out[1].is_directory);
  const auto single = fs.list_status(kRoot.child("d").child("a"));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].length, 1u);
}

TEST(Legacy, TreeListingCostDependsOnProfile) {
  for (const bool per_level : {true, false}) {
    ObjectStore s;
    auto profile = LegacyProfile::swift_like();
    profile.listing_per_level = per_level;
    LegacyFileSystem fs(s, profile);
    write(fs, kRoot.child("t").child("a").child("x"), "1");
    write(fs, kRoot.child("t").child("b").child("y"), "1");
    s.reset_tally();
    const auto tree = fs.list_tree(kRoot.child("t"));
    EXPECT_EQ(tree.size(), 5u);
    EXPECT_EQ(s.snapshot_tally().count(RestOpKind::kGetContainer), per_level ? 3u : 1u);
  }
}

TEST(Legacy, ListingLagHidesFreshPartsFromRename) {
  ObjectStore s(store::ConsistencyPolicy{3, 0, true});
  LegacyFileSystem fs(s, LegacyProfile::swift_like());
  write(fs, kRoot.child("d").child("part-0"), "1");
  // The directory marker was visible to HEAD, but its child is not listed yet.
  EXPECT_TRUE(fs.list_status(kRoot.child("d")).empty());
  s.advance(3);
  EXPECT_EQ(fs.list_status(kRoot.child("d")).size(), 1u);
}

TEST(Legacy, SchemeFollowsProfile) {
  ObjectStore s;
  EXPECT_EQ(LegacyFileSystem(s, LegacyProfile::swift_like()).scheme(), "swift");
  EXPECT_EQ(LegacyFileSystem(s, LegacyProfile::s3a_like()).scheme(), "s3a");
  EXPECT_FALSE(LegacyFileSystem(s, LegacyProfile::s3a_like()).rename_free());
}

}  // namespace
}  // namespace stolab::legacy
