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

// Randomized properties checked against small brute-force models.

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "stolab/engine.hpp"
#include "stolab/error.hpp"
#include "stolab/harness.hpp"
#include "stolab/stocator.hpp"
#include "stolab/trace.hpp"
#include "test_util.hpp"

namespace stolab {
namespace {

using store::ConsistencyPolicy;
using store::ObjectKey;
using store::ObjectStore;
using store::RestOpKind;

constexpr int kSeeds = 200;

std::string pick_name(std::mt19937_64& rng) {
  static const char* dirs[] = {"", "a/", "a/b/", "c/"};
  return std::string(dirs[rng() % 4]) + "k" + std::to_string(rng() % 6);
}

store::Bytes random_body(std::mt19937_64& rng) {
  store::Bytes b(rng() % 9);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

// With zero lag the store must behave exactly like a map.
TEST(StoreProperty, ZeroLagMatchesMapModel) {
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(seed);
    ObjectStore s;
    std::map<std::string, store::Bytes> model;
    for (int step = 0; step < 60; ++step) {
      const std::string name = pick_name(rng);
      const ObjectKey key{"c", name};
      switch (rng() % 5) {
        case 0:
        case 1: {
          const auto body = random_body(rng);
          s.put_bytes(key, body);
          model[name] = body;
          break;
        }
        case 2: {
          const bool present = model.erase(name) > 0;
          if (present) {
            s.delete_object(key);
          } else {
            EXPECT_THROW(s.delete_object(key), Error);
          }
          break;
        }
        case 3: {
          const std::string dst = pick_name(rng);
          if (model.count(name)) {
            s.copy_object(key, {"c", dst});
            model[dst] = model[name];
          } else {
            EXPECT_THROW(s.copy_object(key, {"c", dst}), Error);
          }
          break;
        }
        default:
          s.advance(rng() % 3);
          break;
      }
      const std::string prefix = rng() % 2 ? "" : "a/";
      std::vector<std::string> expected;
      for (const auto& [k, v] : model) {
        if (k.starts_with(prefix)) expected.push_back(k);
      }
      ASSERT_EQ(testing::names(s.list_container("c", prefix)), expected) << "seed " << seed << " step " << step;
      for (const auto& [k, v] : model) ASSERT_EQ(*s.get_object({"c", k}).data, v);
    }
  }
}

// Listings under lag, checked against a replay of the version log.
TEST(StoreProperty, LaggedListingMatchesVersionLog) {
  struct Version {
    store::Tick created;
    std::uint64_t length;
    std::optional<store::Tick> deleted;
  };
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const ConsistencyPolicy policy{rng() % 4, rng() % 4, true};
    ObjectStore s(policy);
    std::map<std::string, std::vector<Version>> log;
    for (int step = 0; step < 50; ++step) {
      const std::string name = pick_name(rng);
      if (rng() % 3 == 0) {
        auto& versions = log[name];
        if (!versions.empty() && !versions.back().deleted) {
          s.delete_object({"c", name});
          versions.back().deleted = s.now();
        }
      } else {
        const auto body = random_body(rng);
        s.put_bytes({"c", name}, body);
        log[name].push_back(Version{s.now(), body.size(), std::nullopt});
      }
      s.advance(rng() % 2);

      for (const store::Tick at : {s.now(), s.now() + 2, s.now() + 5}) {
        std::vector<std::pair<std::string, std::uint64_t>> expected;
        for (const auto& [k, versions] : log) {
          const Version* seen = nullptr;
          for (const auto& v : versions) {
            if (v.created + policy.create_listing_lag <= at) seen = &v;
          }
          if (seen == nullptr) continue;
          if (seen->deleted && *seen->deleted + policy.delete_listing_lag <= at) continue;
          expected.emplace_back(k, seen->length);
        }
        std::vector<std::pair<std::string, std::uint64_t>> actual;
        for (const auto& e : s.list_container("c", "", std::nullopt, at).objects) actual.emplace_back(e.name, e.length);
        ASSERT_EQ(actual, expected) << "seed " << seed << " step " << step << " at " << at;
      }
    }
  }
}

// A stream is all-or-nothing: never visible mid-write, always whole after.
TEST(StoreProperty, StreamedPutsAreAtomic) {
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(5000 + seed);
    ObjectStore s;
    const ObjectKey key{"c", "obj"};
    const bool existed = rng() % 2;
    if (existed) s.put_bytes(key, testing::view("old"));
    auto put = s.begin_put(key);
    store::Bytes written;
    const int chunks = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < chunks; ++i) {
      const auto chunk = random_body(rng);
      put.write(chunk);
      written.insert(written.end(), chunk.begin(), chunk.end());
      if (existed) {
        ASSERT_EQ(testing::text(*s.get_object(key).data), "old");
      } else {
        ASSERT_THROW(s.head_object(key), Error);
      }
    }
    if (rng() % 3 == 0) {
      put.abort();
      if (existed) ASSERT_EQ(testing::text(*s.get_object(key).data), "old");
      else ASSERT_THROW(s.get_object(key), Error);
    } else {
      put.finish();
      ASSERT_EQ(*s.get_object(key).data, written);
    }
  }
}

// Every call is metered exactly once, failures included, and the trace
// reproduces the tally.
TEST(StoreProperty, TallyConservation) {
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(9000 + seed);
    ObjectStore s;
    std::uint64_t calls = 0;
    for (int step = 0; step < 80; ++step) {
      const ObjectKey key{"c", pick_name(rng)};
      try {
        switch (rng() % 7) {
          case 0: ++calls; s.put_bytes(key, random_body(rng)); break;
          case 1: ++calls; s.get_object(key); break;
          case 2: ++calls; s.head_object(key); break;
          case 3: ++calls; s.delete_object(key); break;
          case 4: ++calls; s.copy_object(key, {"c", pick_name(rng)}); break;
          case 5: ++calls; s.list_container("c", rng() % 2 ? "" : "a/", '/'); break;
          default: {
            auto mp = s.begin_multipart(key);
            const int parts = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < parts; ++i) {
              ++calls;
              mp.upload_part(random_body(rng));
            }
            mp.complete();
            break;
          }
        }
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::kNotFound);
      }
    }
    auto live = s.snapshot_tally();
    EXPECT_EQ(live.total(), calls);
    EXPECT_EQ(s.trace().size(), calls);
    live.peak_staged = 0;
    EXPECT_EQ(store::replay(s.trace()), live);
    EXPECT_EQ(store::replay(store::parse_jsonl(store::to_jsonl(s.trace()))), live);
  }
}

std::string digits(std::mt19937_64& rng, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += static_cast<char>('0' + rng() % 10);
  return out;
}

TEST(CodecProperty, TempPathsAndFinalNamesRoundTrip) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 2000; ++i) {
    const fs::AttemptId id{digits(rng, 1 + rng() % 12), digits(rng, 1 + rng() % 6),
                           static_cast<std::uint32_t>(rng() % 100000)};
    ASSERT_EQ(fs::AttemptId::parse(id.str()), id);
    ASSERT_EQ(fs::TaskRef::parse(id.task_str()), (fs::TaskRef{id.job_timestamp, id.task_number}));

    const std::string part = rng() % 4 ? engine::part_name(static_cast<std::uint32_t>(rng() % 100000))
                                       : "x_attempt_" + digits(rng, 3);
    const auto ds = fs::FsPath("swift2d", "bucket", {"d" + digits(rng, 2), "out"});
    const auto temp = ds.child("_temporary").child("0").child("_temporary").child(id.str()).child(part);
    const auto m = fs::match_temp_pattern(temp);
    ASSERT_TRUE(m.has_value());
    ASSERT_EQ(fs::render(*m), temp);
    ASSERT_EQ(m->depth, fs::TempDepth::kPartFile);

    const auto final_path = fs::final_name_for(*m);
    ASSERT_EQ(final_path.parent(), ds);
    const auto parsed = fs::parse_final_name(final_path.name());
    ASSERT_TRUE(parsed.has_value());
    ASSERT_EQ(parsed->part, part);
    ASSERT_EQ(parsed->attempt, id);

    const auto task_file = ds.child("_temporary").child("0").child(id.task_str()).child(part);
    const auto tm = fs::match_temp_pattern(task_file);
    ASSERT_TRUE(tm.has_value());
    ASSERT_EQ(fs::render(*tm), task_file);
  }
}

TEST(CodecProperty, ManifestRoundTrip) {
  std::mt19937_64 rng(78);
  for (int i = 0; i < 500; ++i) {
    fs::SuccessManifest m;
    const int parts = static_cast<int>(rng() % 12);
    for (int p = 0; p < parts; ++p) {
      m.committed[engine::part_name(static_cast<std::uint32_t>(rng() % 50))] =
          fs::AttemptId{digits(rng, 12), digits(rng, 6), static_cast<std::uint32_t>(rng() % 7)};
    }
    ASSERT_EQ(stocator::decode_manifest(stocator::encode_manifest(m)), m);
  }
}

engine::ConnectorFactory factory_for(harness::Scenario s) { return harness::connector_for(harness::describe(s)); }

// Oracle for the commit protocols: v1 writes each byte once and copies it
// twice, v2 copies once, the rename-free path never copies.
TEST(CommitProperty, RenameAndBytesLaws) {
  std::mt19937_64 rng(314);
  for (std::uint32_t n : {1u, 2u, 4u, 8u}) {
    for (int trial = 0; trial < 3; ++trial) {
      engine::JobSpec base;
      base.dataset = fs::FsPath::parse("swift2d://res/out");
      std::uint64_t total = 0;
      for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint64_t size = rng() % 5000;
        total += size;
        base.parts.push_back(engine::PartSpec{i, size, rng(), engine::task_number_for(i)});
      }
      struct Expect {
        harness::Scenario scenario;
        std::uint64_t copies;
        std::uint64_t copied_bytes;
      };
      for (const Expect& e : {Expect{harness::Scenario::kHsBase, 2ull * n, 2 * total},
                              Expect{harness::Scenario::kS3aBase, 2ull * n, 2 * total},
                              Expect{harness::Scenario::kHsCv2, n, total},
                              Expect{harness::Scenario::kS3aCv2, n, total},
                              Expect{harness::Scenario::kS3aCv2Fu, n, total},
                              Expect{harness::Scenario::kStocator, 0, 0}}) {
        auto spec = base;
        spec.committer = harness::describe(e.scenario).committer;
        const auto report = engine::run_job(spec, factory_for(e.scenario), ConsistencyPolicy{});
        ASSERT_TRUE(report.complete);
        EXPECT_EQ(report.tally.count(RestOpKind::kCopyObject), e.copies) << harness::to_string(e.scenario);
        EXPECT_EQ(report.tally.bytes_copied, e.copied_bytes) << harness::to_string(e.scenario);
        EXPECT_EQ(report.tally.bytes_put, total) << harness::to_string(e.scenario);
      }
    }
  }
}

TEST(CommitProperty, OpCountsGrowWithParts) {
  for (harness::Scenario s : harness::kAllScenarios) {
    std::uint64_t previous = 0;
    for (std::uint32_t n : {1u, 2u, 3u, 5u, 8u, 13u}) {
      const auto cell = harness::run_cell(harness::Workload::write_only(n, 64), s, {});
      EXPECT_GT(cell.run.tally.total(), previous) << harness::to_string(s) << " n=" << n;
      previous = cell.run.tally.total();
    }
  }
}

// Any committed job resolves one attempt per part with the canonical bytes,
// whatever the connector.
TEST(SpeculationProperty, RandomPlansAcrossConnectors) {
  for (harness::Scenario s : {harness::Scenario::kStocator, harness::Scenario::kHsBase, harness::Scenario::kS3aCv2}) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      const std::uint32_t parts = 1 + static_cast<std::uint32_t>(seed % 4);
      engine::JobSpec spec;
      spec.dataset = fs::FsPath::parse("swift2d://res/out");
      spec.parts = engine::JobSpec::uniform_parts(parts, 1 + seed % 300, seed);
      spec.committer = harness::describe(s).committer;
      const auto plan = engine::FaultPlan::random(seed, parts);
      const auto report = engine::run_job(spec, factory_for(s), ConsistencyPolicy{}, plan);
      ASSERT_TRUE(report.wrote_success);
      ASSERT_TRUE(report.complete) << harness::to_string(s) << " seed " << seed << " plan " << plan.encode_outcomes();
      ASSERT_EQ(report.resolution.size(), parts);
    }
  }
}

// Manifest reads never list, so listing lag cannot hide committed parts.
TEST(ConsistencyProperty, ManifestImmuneListingNot) {
  for (store::Tick lag = 0; lag <= 5; ++lag) {
    engine::JobSpec spec;
    spec.dataset = fs::FsPath::parse("swift2d://res/out");
    spec.parts = engine::JobSpec::uniform_parts(4, 32, lag);
    spec.committer = engine::CommitterVersion::kNone;
    spec.read_option = stocator::ReadOption::kManifest;
    const auto factory = factory_for(harness::Scenario::kStocator);
    const auto manifest = engine::run_job(spec, factory, ConsistencyPolicy{lag, 0, true});
    EXPECT_TRUE(manifest.complete) << "lag " << lag;
    EXPECT_EQ(manifest.tally.count(RestOpKind::kGetContainer), 1u);

    spec.read_option = stocator::ReadOption::kListing;
    const auto listing = engine::run_job(spec, factory, ConsistencyPolicy{lag, 0, true});
    // Listing reads run right after the job finishes, so a lag longer than
    // the job's tail hides parts.
    if (lag == 0) EXPECT_TRUE(listing.complete);
    if (lag >= 4) EXPECT_FALSE(listing.complete) << "lag " << lag;
  }
}

}  // namespace
}  // namespace stolab
