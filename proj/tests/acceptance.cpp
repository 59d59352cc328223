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

// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stolab/engine.hpp"
#include "stolab/error.hpp"
#include "stolab/harness.hpp"
#include "stolab/legacy.hpp"
#include "stolab/stocator.hpp"
#include "stolab/trace.hpp"

#ifndef STOLAB_SOURCE_DIR
#define STOLAB_SOURCE_DIR "."
#endif

namespace {

using namespace stolab;
using harness::Scenario;
using store::RestOpKind;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

constexpr std::uint64_t kMiB = 1ull << 20;

std::string tally_str(const store::OpTally& t) {
  std::string out;
  for (auto kind : store::kAllOpKinds) {
    if (t.count(kind) == 0) continue;
    if (!out.empty()) out += ' ';
    out += std::string(store::to_string(kind)) + "=" + std::to_string(t.count(kind));
  }
  return out + " total=" + std::to_string(t.total());
}

Verdict stocator_single_task() {
  Verdict v;
  const auto cell = harness::run_cell(harness::Workload::single_task(), Scenario::kStocator, {});
  const auto& t = cell.run.tally;
  v.require(t.count(RestOpKind::kHeadObject) == 4, "HEAD");
  v.require(t.count(RestOpKind::kPutObject) == 3, "PUT");
  v.require(t.count(RestOpKind::kCopyObject) == 0, "COPY");
  v.require(t.count(RestOpKind::kDeleteObject) == 0, "DELETE");
  v.require(t.count(RestOpKind::kGetContainer) == 1, "GET-container");
  v.require(t.total() == 8, "total");
  if (v.pass) v.detail = tally_str(t);
  else v.detail += " got " + tally_str(t);
  return v;
}

Verdict golden_names() {
  Verdict v;
  const std::string a = "/res/data.txt/part-0000";
  const std::string s = "_attempt_201512062056_0000_m_000000_";
  const std::vector<std::string> expected{
      "PUT " + a + "0" + s + "0",    "PUT " + a + "1" + s + "0",    "PUT " + a + "2" + s + "0",
      "PUT " + a + "2" + s + "1",    "PUT " + a + "2" + s + "2",    "DELETE " + a + "2" + s + "0",
      "DELETE " + a + "2" + s + "2", "PUT /res/data.txt/_SUCCESS",
  };
  auto w = harness::Workload::three_task();
  w.literal_task_numbers = true;
  const auto cell = harness::run_cell(w, Scenario::kStocator, {});
  const auto got = harness::object_write_lines(cell.run.trace, harness::output_path(w));
  v.require(got == expected, "event names differ");
  v.require(cell.run.complete, "dataset incomplete");
  if (!v.pass) {
    for (const auto& line : got) v.detail += "\n      " + line;
  } else {
    v.detail = std::to_string(got.size()) + " PUT/DELETE names identical";
  }
  return v;
}

Verdict bytes_law() {
  Verdict v;
  const auto w = harness::Workload::write_only(8, kMiB);
  const double total = 8.0 * static_cast<double>(kMiB);
  struct Case {
    Scenario s;
    double ratio;
  };
  std::string detail;
  for (const Case& c : {Case{Scenario::kHsBase, 3.0}, Case{Scenario::kS3aBase, 3.0}, Case{Scenario::kHsCv2, 2.0},
                        Case{Scenario::kS3aCv2, 2.0}, Case{Scenario::kStocator, 1.0}}) {
    const auto cell = harness::run_cell(w, c.s, {});
    const double ratio = static_cast<double>(cell.run.tally.bytes_put + cell.run.tally.bytes_copied) / total;
    v.require(ratio == c.ratio, std::string(harness::to_string(c.s)) + " ratio " + std::to_string(ratio));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.1f ", std::string(harness::to_string(c.s)).c_str(), ratio);
    detail += buf;
  }
  if (v.pass) v.detail = detail;
  return v;
}

Verdict rename_law() {
  Verdict v;
  for (std::uint32_t n : {1u, 2u, 4u, 8u}) {
    const auto w = harness::Workload::write_only(n, 1024);
    for (Scenario s : harness::kAllScenarios) {
      const auto committer = harness::describe(s).committer;
      const std::uint64_t expected = committer == engine::CommitterVersion::kV1   ? 2ull * n
                                     : committer == engine::CommitterVersion::kV2 ? n
                                                                                  : 0;
      const auto copies = harness::run_cell(w, s, {}).run.tally.count(RestOpKind::kCopyObject);
      v.require(copies == expected, std::string(harness::to_string(s)) + " N=" + std::to_string(n) + " COPY=" +
                                        std::to_string(copies) + " want " + std::to_string(expected));
    }
  }
  if (v.pass) v.detail = "N in {1,2,4,8}: v1 2N, v2 N, Stocator 0";
  return v;
}

Verdict hazard() {
  Verdict v;
  const std::string path = std::string(STOLAB_SOURCE_DIR) + "/configs/hazard.ini";
  std::ifstream in(path);
  if (!in) {
    v.require(false, "cannot read " + path);
    return v;
  }
  std::stringstream text;
  text << in.rdbuf();
  const auto config = harness::parse_config(text.str());
  v.require(config.consistency.create_listing_lag == 3, "shipped schedule lag is not 3");
  std::string detail;
  for (const auto& r : harness::run_hazard_demo(config.consistency, config.parts, config.part_size)) {
    const bool legacy_v1_v2 = r.label == "HS-Base" || r.label == "HS-Cv2" || r.label == "S3a-Base" ||
                              r.label == "S3a-Cv2";
    if (legacy_v1_v2) {
      v.require(r.wrote_success && !r.complete, r.label + " expected _SUCCESS and incomplete");
    } else if (r.label == "Stocator/manifest") {
      v.require(r.wrote_success && r.complete, r.label + " expected _SUCCESS and complete");
    }
    detail += r.label + "=" + (r.complete ? "complete " : "incomplete ");
  }
  if (v.pass) v.detail = detail;
  return v;
}

Verdict speculation_resolution() {
  Verdict v;
  const auto factory = harness::connector_for(harness::describe(Scenario::kStocator));
  int committed = 0;
  int failures = 0;
  constexpr int kPlans = 1200;
  for (std::uint64_t seed = 0; seed < kPlans; ++seed) {
    const std::uint32_t parts = 1 + static_cast<std::uint32_t>(seed % 5);
    engine::JobSpec spec;
    spec.dataset = fs::FsPath::parse("swift2d://res/spec");
    spec.parts = engine::JobSpec::uniform_parts(parts, 1 + (seed * 37) % 700, seed);
    spec.committer = engine::CommitterVersion::kNone;
    store::ObjectStore store;
    const auto plan = engine::FaultPlan::random(seed, parts);
    const auto report = engine::run_job(spec, factory, store, plan);
    if (!report.wrote_success) continue;
    ++committed;
    store.set_trace_enabled(false);
    auto reader = factory(store);
    const auto read = engine::read_dataset(*reader, spec.dataset, stocator::ReadOption::kListing);
    std::set<std::string> seen;
    bool ok = read.parts.size() == parts;
    for (const auto& p : read.parts) {
      ok = ok && seen.insert(p.part).second && p.attempt.has_value() && p.data != nullptr;
      if (!ok) break;
      const auto& ps = spec.parts.at(static_cast<std::size_t>(std::stoul(p.part.substr(5))));
      ok = *p.data == engine::canonical_body(ps.seed, ps.size);
    }
    if (!ok) {
      ++failures;
      if (failures <= 3) v.require(false, "seed " + std::to_string(seed) + " plan " + plan.encode_outcomes());
    }
  }
  v.require(committed >= 1000, "only " + std::to_string(committed) + " plans committed");
  v.require(failures == 0, std::to_string(failures) + " failures");
  if (v.pass) v.detail = std::to_string(committed) + " committed plans, 0 failures";
  return v;
}

Verdict read_path() {
  Verdict v;
  const fs::FsPath path = fs::FsPath::parse("swift2d://res/input/part-00000");
  const store::Bytes body(1000, 1);
  auto measure = [&](fs::FileSystem& fs, store::ObjectStore& s) {
    s.reset_tally();
    fs.get_file_status(path);
    fs.open(path);
    return s.snapshot_tally();
  };
  store::ObjectStore s1;
  s1.put_bytes(path.key(), body);
  stocator::StocatorFileSystem st(s1);
  const auto a = measure(st, s1);
  v.require(a.count(RestOpKind::kHeadObject) == 1 && a.count(RestOpKind::kGetObject) == 1 && a.total() == 2,
            "Stocator " + tally_str(a));
  store::ObjectStore s2;
  s2.put_bytes(path.key(), body);
  legacy::LegacyFileSystem lg(s2, legacy::LegacyProfile::swift_like());
  const auto b = measure(lg, s2);
  v.require(b.count(RestOpKind::kHeadObject) == 2 && b.count(RestOpKind::kGetObject) == 1 && b.total() == 3,
            "legacy " + tally_str(b));
  if (v.pass) v.detail = "Stocator 1 HEAD + 1 GET, legacy 2 HEAD + 1 GET";
  return v;
}

Verdict staging() {
  Verdict v;
  const store::Bytes body(12 * kMiB, 0x5a);
  const fs::FsPath path = fs::FsPath::parse("swift2d://res/big/object");
  auto write = [&](fs::FileSystem& fs) {
    auto out = fs.create(path);
    // Feed 1 MiB at a time, as a task writing records would.
    for (std::size_t off = 0; off < body.size(); off += kMiB) out->write(std::span(body).subspan(off, kMiB));
    out->close();
  };
  auto part_puts = [&](const store::ObjectStore& s) {
    return std::count_if(s.trace().begin(), s.trace().end(), [&](const store::StoreEvent& e) {
      return e.kind == RestOpKind::kPutObject && e.name == path.object_name();
    });
  };

  store::ObjectStore s1;
  stocator::StocatorFileSystem st(s1);
  write(st);
  const auto peak_st = s1.snapshot_tally().peak_staged;
  v.require(peak_st <= st.options().chunk_size, "Stocator peak " + std::to_string(peak_st));

  store::ObjectStore s2;
  legacy::LegacyFileSystem lg(s2, legacy::LegacyProfile::s3a_like());
  write(lg);
  const auto peak_lg = s2.snapshot_tally().peak_staged;
  v.require(peak_lg == 12 * kMiB, "legacy peak " + std::to_string(peak_lg));

  store::ObjectStore s3;
  auto profile = legacy::LegacyProfile::s3a_like();
  profile.fast_upload = true;
  legacy::LegacyFileSystem fu(s3, profile);
  write(fu);
  const auto peak_fu = s3.snapshot_tally().peak_staged;
  const auto puts = part_puts(s3);
  v.require(peak_fu <= 5 * kMiB, "fast-upload peak " + std::to_string(peak_fu));
  v.require(puts == 3, "fast-upload part PUTs " + std::to_string(puts));
  v.require(s3.get_object(path.key()).length == body.size(), "fast-upload object length");

  if (v.pass) {
    v.detail = "peaks " + std::to_string(peak_st) + " / " + std::to_string(peak_lg) + " / " + std::to_string(peak_fu) +
               " bytes, " + std::to_string(puts) + " part PUTs";
  }
  return v;
}

std::vector<harness::Workload> full_matrix_workloads() {
  return {harness::Workload::single_task(), harness::Workload::three_task(), harness::Workload::write_only(8, kMiB),
          harness::Workload::copy(8, kMiB), harness::Workload::read_only(8, kMiB)};
}

Verdict determinism() {
  Verdict v;
  const std::vector<Scenario> scenarios(std::begin(harness::kAllScenarios), std::end(harness::kAllScenarios));
  harness::MatrixOptions options;
  options.seed = 1234;
  const auto first = harness::render_trace(harness::run_matrix(full_matrix_workloads(), scenarios, options));
  const auto second = harness::render_trace(harness::run_matrix(full_matrix_workloads(), scenarios, options));
  v.require(!first.empty(), "empty trace");
  v.require(first == second, "traces differ");
  if (v.pass) v.detail = std::to_string(first.size()) + " bytes of JSONL, identical";
  return v;
}

Verdict directional_ratio() {
  Verdict v;
  harness::MatrixOptions options;
  options.pricing = harness::PricingModel::uniform(1.0);
  std::string detail;
  for (const auto& w : {harness::Workload::write_only(8, kMiB), harness::Workload::copy(8, kMiB)}) {
    const auto st = harness::run_cell(w, Scenario::kStocator, options);
    double worst = 1e300;
    for (Scenario s : harness::kAllScenarios) {
      if (s == Scenario::kStocator) continue;
      const auto lg = harness::run_cell(w, s, options);
      v.require(lg.run.tally.total() > st.run.tally.total(),
                w.label() + " " + std::string(harness::to_string(s)) + " ops not above Stocator");
      const double ratio = lg.run.cost / st.run.cost;
      v.require(ratio > 2.0, w.label() + " " + std::string(harness::to_string(s)) + " cost ratio " +
                                 std::to_string(ratio));
      worst = std::min(worst, ratio);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s min ratio %.2fx ", w.label().c_str(), worst);
    detail += buf;
  }
  if (v.pass) v.detail = detail;
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Stocator single-task op count", 1, stocator_single_task},
      {2, "golden event names", 1, golden_names},
      {3, "bytes-written law", 1, bytes_law},
      {4, "rename-cost law", 5, rename_law},
      {5, "eventual-consistency hazard", 1, hazard},
      {6, "speculation resolution", 30, speculation_resolution},
      {7, "read-path optimization", 1, read_path},
      {8, "streaming vs staging", 1, staging},
      {9, "determinism", 10, determinism},
      {10, "directional ratio", 5, directional_ratio},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) v.require(false, "took " + std::to_string(secs) + " s");
    if (!v.pass) ++failed;
    std::printf("%s criterion %2d: %-32s %7.3f s  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
