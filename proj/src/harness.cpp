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

#include "stolab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "stolab/error.hpp"
#include "stolab/trace.hpp"

namespace stolab::harness {

using engine::CommitterVersion;
using store::RestOpKind;

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(sep, start);
    const auto piece = trim(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (!piece.empty()) out.push_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

template <typename T>
T parse_unsigned(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw Error(ErrorCode::kConfig, std::string(key) + ": expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view key, std::string_view text) {
  double value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw Error(ErrorCode::kConfig, std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error(ErrorCode::kConfig, std::string(key) + ": expected a boolean, got '" + std::string(text) + "'");
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

fs::FsPath dataset(std::string container, std::string name) {
  return fs::FsPath("swift2d", std::move(container), {std::move(name)});
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kHsBase: return "HS-Base";
    case Scenario::kS3aBase: return "S3a-Base";
    case Scenario::kStocator: return "Stocator";
    case Scenario::kHsCv2: return "HS-Cv2";
    case Scenario::kS3aCv2: return "S3a-Cv2";
    case Scenario::kS3aCv2Fu: return "S3a-Cv2-FU";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(std::string_view text) {
  for (Scenario s : kAllScenarios) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

ScenarioConfig describe(Scenario scenario, stocator::ReadOption stocator_read) {
  ScenarioConfig config;
  config.scenario = scenario;
  config.stocator = scenario == Scenario::kStocator;
  switch (scenario) {
    case Scenario::kStocator:
      config.committer = CommitterVersion::kNone;
      config.read_option = stocator_read;
      break;
    case Scenario::kHsBase:
      config.profile = legacy::LegacyProfile::swift_like();
      config.committer = CommitterVersion::kV1;
      break;
    case Scenario::kHsCv2:
      config.profile = legacy::LegacyProfile::swift_like();
      config.committer = CommitterVersion::kV2;
      break;
    case Scenario::kS3aBase:
      config.profile = legacy::LegacyProfile::s3a_like();
      config.committer = CommitterVersion::kV1;
      break;
    case Scenario::kS3aCv2:
      config.profile = legacy::LegacyProfile::s3a_like();
      config.committer = CommitterVersion::kV2;
      break;
    case Scenario::kS3aCv2Fu:
      config.profile = legacy::LegacyProfile::s3a_like();
      config.profile.fast_upload = true;
      config.committer = CommitterVersion::kV2;
      break;
  }
  return config;
}

engine::ConnectorFactory connector_for(const ScenarioConfig& config) {
  if (config.stocator) {
    const auto options = config.stocator_options;
    return [options](store::ObjectStore& s) -> std::unique_ptr<fs::FileSystem> {
      return std::make_unique<stocator::StocatorFileSystem>(s, options);
    };
  }
  config.profile.validate();
  const auto profile = config.profile;
  return [profile](store::ObjectStore& s) -> std::unique_ptr<fs::FileSystem> {
    return std::make_unique<legacy::LegacyFileSystem>(s, profile);
  };
}

// ---------------------------------------------------------------------------

std::string_view to_string(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kSingleTask: return "SingleTask";
    case WorkloadKind::kThreeTask: return "ThreeTask";
    case WorkloadKind::kWriteOnly: return "WriteOnly";
    case WorkloadKind::kCopy: return "Copy";
    case WorkloadKind::kReadOnly: return "ReadOnly";
  }
  return "?";
}

std::optional<WorkloadKind> parse_workload(std::string_view text) {
  for (auto kind : {WorkloadKind::kSingleTask, WorkloadKind::kThreeTask, WorkloadKind::kWriteOnly, WorkloadKind::kCopy,
                    WorkloadKind::kReadOnly}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

Workload Workload::single_task() { return Workload{}; }

Workload Workload::three_task() {
  Workload w;
  w.kind = WorkloadKind::kThreeTask;
  w.parts = 3;
  w.faults = engine::FaultPlan::three_task_speculation();
  return w;
}

Workload Workload::write_only(std::uint32_t parts, std::uint64_t part_size) {
  Workload w;
  w.kind = WorkloadKind::kWriteOnly;
  w.parts = parts;
  w.part_size = part_size;
  return w;
}

Workload Workload::copy(std::uint32_t parts, std::uint64_t part_size) {
  Workload w = write_only(parts, part_size);
  w.kind = WorkloadKind::kCopy;
  return w;
}

Workload Workload::read_only(std::uint32_t parts, std::uint64_t part_size) {
  Workload w = write_only(parts, part_size);
  w.kind = WorkloadKind::kReadOnly;
  return w;
}

std::string Workload::label() const {
  switch (kind) {
    case WorkloadKind::kSingleTask:
    case WorkloadKind::kThreeTask: return std::string(to_string(kind));
    default: return std::string(to_string(kind)) + "(" + std::to_string(parts) + "x" + std::to_string(part_size) + ")";
  }
}

fs::FsPath output_path(const Workload& workload) {
  switch (workload.kind) {
    case WorkloadKind::kSingleTask:
    case WorkloadKind::kThreeTask: return dataset("res", "data.txt");
    case WorkloadKind::kWriteOnly: return dataset("res", "generated");
    case WorkloadKind::kCopy: return dataset("res", "copy");
    case WorkloadKind::kReadOnly: return dataset("res", "input");
  }
  return dataset("res", "data.txt");
}

fs::FsPath input_path(const Workload&) { return dataset("res", "input"); }

// ---------------------------------------------------------------------------

bool is_class_a(RestOpKind kind) {
  return kind == RestOpKind::kPutObject || kind == RestOpKind::kCopyObject || kind == RestOpKind::kGetContainer;
}

double PricingModel::price(RestOpKind kind) const { return is_class_a(kind) ? class_a : class_b; }

void PricingModel::validate() const {
  if (!(class_a >= 0.0) || !(class_b >= 0.0)) throw Error(ErrorCode::kConfig, "prices must be non-negative");
}

double compute_cost(const store::OpTally& tally, const PricingModel& pricing) {
  double cost = 0.0;
  for (RestOpKind kind : store::kAllOpKinds) cost += static_cast<double>(tally.count(kind)) * pricing.price(kind);
  return cost;
}

// ---------------------------------------------------------------------------

namespace {

engine::JobSpec job_for(const Workload& w, const ScenarioConfig& sc, std::uint64_t seed) {
  engine::JobSpec spec;
  spec.dataset = output_path(w);
  spec.committer = sc.committer;
  spec.read_option = sc.read_option;
  switch (w.kind) {
    case WorkloadKind::kSingleTask:
      spec.job_timestamp = "201702221313";
      spec.first_attempt_number = 1;
      spec.parts = engine::JobSpec::uniform_parts(1, w.part_size, seed);
      spec.parts[0].index = 1;
      spec.parts[0].task_number = engine::task_number_for(1);
      break;
    case WorkloadKind::kThreeTask:
      spec.parts = engine::JobSpec::uniform_parts(w.parts, w.part_size, seed);
      if (w.literal_task_numbers) {
        for (auto& p : spec.parts) p.task_number = engine::task_number_for(0);
      }
      break;
    default:
      spec.parts = engine::JobSpec::uniform_parts(w.parts, w.part_size, seed);
      break;
  }
  return spec;
}

}  // namespace

namespace {

struct CellRun {
  CellReport cell;
  engine::JobSpec spec;
  engine::ConnectorFactory factory;
};

CellRun run_cell_on(store::ObjectStore& store, const Workload& workload, Scenario scenario,
                    const MatrixOptions& options, std::uint32_t repeat) {
  options.pricing.validate();
  ScenarioConfig sc = describe(scenario, options.stocator_read_option);
  sc.stocator_options = options.stocator_options;
  if (options.fast_upload_part_size) sc.profile.fast_upload_part_size = *options.fast_upload_part_size;
  CellRun out;
  out.factory = connector_for(sc);
  const std::uint64_t seed = options.seed * 1'000'033ull + repeat;

  out.cell.scenario = scenario;
  out.cell.workload = workload;
  out.cell.repeat = repeat;

  out.spec = job_for(workload, sc, seed);
  if (workload.kind == WorkloadKind::kCopy || workload.kind == WorkloadKind::kReadOnly) {
    engine::JobSpec setup = out.spec;
    setup.dataset = input_path(workload);
    engine::run_job(setup, out.factory, store);
    const auto& policy = workload.consistency;
    store.advance(std::max(policy.create_listing_lag, policy.delete_listing_lag) + 1);
    out.spec.input = input_path(workload);
    if (workload.kind == WorkloadKind::kReadOnly) out.spec.write_output = false;
  }
  out.cell.run = engine::run_job(out.spec, out.factory, store, workload.faults);
  out.cell.run.cost = compute_cost(out.cell.run.tally, options.pricing);
  return out;
}

}  // namespace

CellReport run_cell(const Workload& workload, Scenario scenario, const MatrixOptions& options, std::uint32_t repeat) {
  store::ObjectStore store(workload.consistency);
  return run_cell_on(store, workload, scenario, options, repeat).cell;
}

std::vector<CellReport> run_matrix(const std::vector<Workload>& workloads, const std::vector<Scenario>& scenarios,
                                   const MatrixOptions& options) {
  if (options.repeats == 0) throw Error(ErrorCode::kConfig, "repeats must be at least 1");
  std::vector<CellReport> cells;
  for (const auto& w : workloads) {
    for (Scenario s : scenarios) {
      for (std::uint32_t r = 0; r < options.repeats; ++r) cells.push_back(run_cell(w, s, options, r));
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------

std::optional<ReportFormat> parse_format(std::string_view text) {
  if (text == "table") return ReportFormat::kTable;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "jsonl") return ReportFormat::kJsonl;
  return std::nullopt;
}

ReportRow row_of(const CellReport& cell) {
  const auto& t = cell.run.tally;
  ReportRow row;
  row.scenario = std::string(to_string(cell.scenario));
  row.workload = cell.workload.label();
  row.head = t.count(RestOpKind::kHeadObject);
  row.put = t.count(RestOpKind::kPutObject);
  row.copy = t.count(RestOpKind::kCopyObject);
  row.del = t.count(RestOpKind::kDeleteObject);
  row.get_container = t.count(RestOpKind::kGetContainer);
  row.total = t.total();
  row.bytes_put = t.bytes_put;
  row.bytes_got = t.bytes_got;
  row.bytes_copied = t.bytes_copied;
  row.peak_staged = t.peak_staged;
  row.cost = cell.run.cost;
  row.complete = cell.run.complete;
  row.get = t.count(RestOpKind::kGetObject);
  row.head_container = t.count(RestOpKind::kHeadContainer);
  return row;
}

namespace {

const std::vector<std::string>& columns() {
  static const std::vector<std::string> cols{
      "scenario", "workload",    "HEAD",         "PUT",         "COPY", "DELETE", "GET-container", "total",
      "bytes_put", "bytes_got",  "bytes_copied", "peak_staged", "cost", "complete", "GET",         "HEAD-container"};
  return cols;
}

std::vector<std::string> cells_of(const ReportRow& r) {
  return {r.scenario,
          r.workload,
          std::to_string(r.head),
          std::to_string(r.put),
          std::to_string(r.copy),
          std::to_string(r.del),
          std::to_string(r.get_container),
          std::to_string(r.total),
          std::to_string(r.bytes_put),
          std::to_string(r.bytes_got),
          std::to_string(r.bytes_copied),
          std::to_string(r.peak_staged),
          format_double(r.cost),
          r.complete ? "true" : "false",
          std::to_string(r.get),
          std::to_string(r.head_container)};
}

ReportRow row_from_cells(const std::vector<std::string>& c) {
  if (c.size() != columns().size()) {
    throw Error(ErrorCode::kUnknownFormat, "report row has " + std::to_string(c.size()) + " fields");
  }
  ReportRow r;
  try {
    r.scenario = c[0];
    r.workload = c[1];
    r.head = parse_unsigned<std::uint64_t>("HEAD", c[2]);
    r.put = parse_unsigned<std::uint64_t>("PUT", c[3]);
    r.copy = parse_unsigned<std::uint64_t>("COPY", c[4]);
    r.del = parse_unsigned<std::uint64_t>("DELETE", c[5]);
    r.get_container = parse_unsigned<std::uint64_t>("GET-container", c[6]);
    r.total = parse_unsigned<std::uint64_t>("total", c[7]);
    r.bytes_put = parse_unsigned<std::uint64_t>("bytes_put", c[8]);
    r.bytes_got = parse_unsigned<std::uint64_t>("bytes_got", c[9]);
    r.bytes_copied = parse_unsigned<std::uint64_t>("bytes_copied", c[10]);
    r.peak_staged = parse_unsigned<std::uint64_t>("peak_staged", c[11]);
    r.cost = parse_double("cost", c[12]);
    r.complete = parse_bool("complete", c[13]);
    r.get = parse_unsigned<std::uint64_t>("GET", c[14]);
    r.head_container = parse_unsigned<std::uint64_t>("HEAD-container", c[15]);
  } catch (const Error& e) {
    throw Error(ErrorCode::kUnknownFormat, e.what());
  }
  return r;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

}  // namespace

std::string render_rows(const std::vector<ReportRow>& rows, ReportFormat format) {
  const auto& cols = columns();
  std::string out;
  switch (format) {
    case ReportFormat::kCsv: {
      for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
      out += '\n';
      for (const auto& row : rows) {
        const auto c = cells_of(row);
        for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + c[i];
        out += '\n';
      }
      break;
    }
    case ReportFormat::kJsonl: {
      for (const auto& row : rows) {
        const auto c = cells_of(row);
        nlohmann::ordered_json j;
        j["scenario"] = row.scenario;
        j["workload"] = row.workload;
        for (std::size_t i = 2; i < cols.size(); ++i) {
          if (cols[i] == "cost") {
            j[cols[i]] = row.cost;
          } else if (cols[i] == "complete") {
            j[cols[i]] = row.complete;
          } else {
            j[cols[i]] = std::stoull(c[i]);
          }
        }
        out += j.dump() + '\n';
      }
      break;
    }
    case ReportFormat::kTable: {
      std::vector<std::size_t> width(cols.size());
      for (std::size_t i = 0; i < cols.size(); ++i) width[i] = cols[i].size();
      std::vector<std::vector<std::string>> body;
      for (const auto& row : rows) {
        body.push_back(cells_of(row));
        char cost[64];
        std::snprintf(cost, sizeof cost, "%.4f", row.cost);
        body.back()[12] = cost;
        for (std::size_t i = 0; i < cols.size(); ++i) width[i] = std::max(width[i], body.back()[i].size());
      }
      auto emit = [&](const std::vector<std::string>& c) {
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (i) out += "  ";
          const std::size_t pad = width[i] - c[i].size();
          // Names left-aligned, numbers right-aligned.
          if (i < 2) {
            out += c[i] + std::string(i + 1 == c.size() ? 0 : pad, ' ');
          } else {
            out += std::string(pad, ' ') + c[i];
          }
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
      };
      emit(cols);
      for (const auto& c : body) emit(c);
      break;
    }
  }
  return out;
}

std::string render_report(const std::vector<CellReport>& cells, ReportFormat format) {
  std::vector<ReportRow> rows;
  rows.reserve(cells.size());
  for (const auto& c : cells) rows.push_back(row_of(c));
  return render_rows(rows, format);
}

std::vector<ReportRow> parse_csv_report(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::kUnknownFormat, "empty CSV report");
  if (split(lines[0], ',') != columns()) throw Error(ErrorCode::kUnknownFormat, "unexpected CSV header");
  std::vector<ReportRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    // Keep empty fields so a short row is reported, not silently shifted.
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(lines[i]);
    while (std::getline(in, field, ',')) fields.push_back(field);
    rows.push_back(row_from_cells(fields));
  }
  return rows;
}

std::vector<ReportRow> parse_jsonl_report(std::string_view text) {
  std::vector<ReportRow> rows;
  for (const auto& line : split_lines(text)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kUnknownFormat, std::string("bad report line: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::kUnknownFormat, "report line is not an object");
    std::vector<std::string> fields;
    for (const auto& col : columns()) {
      if (!j.contains(col)) throw Error(ErrorCode::kUnknownFormat, "report line lacks '" + col + "'");
      const auto& v = j.at(col);
      if (v.is_string()) {
        fields.push_back(v.get<std::string>());
      } else if (v.is_boolean()) {
        fields.push_back(v.get<bool>() ? "true" : "false");
      } else if (v.is_number_unsigned()) {
        fields.push_back(std::to_string(v.get<std::uint64_t>()));
      } else if (v.is_number()) {
        fields.push_back(format_double(v.get<double>()));
      } else {
        throw Error(ErrorCode::kUnknownFormat, "bad value for '" + col + "'");
      }
    }
    rows.push_back(row_from_cells(fields));
  }
  return rows;
}

std::string render_trace(const std::vector<CellReport>& cells) {
  std::string out;
  for (const auto& c : cells) out += store::to_jsonl(c.run.trace);
  return out;
}

std::string event_line(const store::StoreEvent& e) {
  std::string verb;
  switch (e.kind) {
    case RestOpKind::kPutObject: verb = "PUT"; break;
    case RestOpKind::kGetObject: verb = "GET"; break;
    case RestOpKind::kHeadObject: verb = "HEAD"; break;
    case RestOpKind::kGetContainer: verb = "GET-CONTAINER"; break;
    case RestOpKind::kHeadContainer: verb = "HEAD-CONTAINER"; break;
    case RestOpKind::kDeleteObject: verb = "DELETE"; break;
    case RestOpKind::kCopyObject: verb = "COPY"; break;
  }
  std::string line = verb + " /" + e.container;
  if (e.kind == RestOpKind::kGetContainer) {
    if (!e.name.empty()) line += "?prefix=" + e.name;
  } else if (!e.name.empty()) {
    line += "/" + e.name;
  }
  if (!e.src.empty()) line += " <- " + e.src;
  return line;
}

std::vector<std::string> object_write_lines(const std::vector<store::StoreEvent>& trace, const fs::FsPath& dataset) {
  std::vector<std::string> lines;
  for (const auto& e : trace) {
    if (e.kind != RestOpKind::kPutObject && e.kind != RestOpKind::kDeleteObject) continue;
    if (e.container == dataset.container() && e.name == dataset.object_name()) continue;
    lines.push_back(event_line(e));
  }
  return lines;
}

std::vector<std::string> all_event_lines(const std::vector<store::StoreEvent>& trace) {
  std::vector<std::string> lines;
  lines.reserve(trace.size());
  for (const auto& e : trace) lines.push_back(event_line(e));
  return lines;
}

// ---------------------------------------------------------------------------

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys{
      {"store", "create_listing_lag", "ticks before a new object appears in listings"},
      {"store", "delete_listing_lag", "ticks before a deleted object leaves listings"},
      {"store", "read_after_write_strong", "new objects are immediately visible to GET/HEAD"},
      {"scenario", "scenarios", "comma-separated scenario names"},
      {"scenario", "read_option", "Stocator read path: listing or manifest"},
      {"scenario", "chunk_size", "Stocator streaming chunk size in bytes"},
      {"scenario", "fast_upload_part_size", "multipart part size for fast upload"},
      {"workload", "workloads", "comma-separated workload names"},
      {"workload", "parts", "parts per bulk workload"},
      {"workload", "part_size", "bytes per part for bulk workloads"},
      {"faults", "plan", "task:ordinal=outcome entries separated by ';'"},
      {"faults", "speculation_threshold", "ticks before a speculative copy launches, 0 disables"},
      {"faults", "abort_cleanup", "remove output of losing attempts"},
      {"faults", "random_seed", "use a random fault plan seeded with this value"},
      {"pricing", "class_a", "price per PUT, COPY and container listing"},
      {"pricing", "class_b", "price per GET, HEAD and DELETE"},
      {"output", "format", "table, csv or jsonl"},
      {"output", "repeats", "runs per matrix cell"},
      {"output", "seed", "seed for part contents"},
  };
  return keys;
}

void apply_setting(HarnessConfig& c, std::string_view raw_key, std::string_view raw_value) {
  std::string key(raw_key);
  const std::string value = trim(raw_value);
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    const std::string section = key.substr(0, dot);
    key = key.substr(dot + 1);
    const auto& keys = config_keys();
    const bool known = std::any_of(keys.begin(), keys.end(), [&](const ConfigKey& k) {
      return k.section == section && k.key == key;
    });
    if (!known) throw Error(ErrorCode::kConfig, "unknown setting " + section + "." + key);
  }

  if (key == "create_listing_lag") {
    c.consistency.create_listing_lag = parse_unsigned<store::Tick>(key, value);
  } else if (key == "delete_listing_lag") {
    c.consistency.delete_listing_lag = parse_unsigned<store::Tick>(key, value);
  } else if (key == "read_after_write_strong") {
    c.consistency.read_after_write_strong = parse_bool(key, value);
  } else if (key == "scenarios") {
    c.scenarios.clear();
    for (const auto& name : split(value, ',')) {
      const auto s = parse_scenario(name);
      if (!s) throw Error(ErrorCode::kConfig, "unknown scenario '" + name + "'");
      c.scenarios.push_back(*s);
    }
    if (c.scenarios.empty()) throw Error(ErrorCode::kConfig, "scenarios must not be empty");
  } else if (key == "read_option") {
    const auto opt = stocator::parse_read_option(value);
    if (!opt) throw Error(ErrorCode::kConfig, "unknown read option '" + value + "'");
    c.matrix.stocator_read_option = *opt;
  } else if (key == "chunk_size") {
    c.matrix.stocator_options.chunk_size = parse_unsigned<std::size_t>(key, value);
    if (c.matrix.stocator_options.chunk_size == 0) throw Error(ErrorCode::kConfig, "chunk_size must be positive");
  } else if (key == "fast_upload_part_size") {
    c.matrix.fast_upload_part_size = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "workloads") {
    c.workloads.clear();
    for (const auto& name : split(value, ',')) {
      const auto w = parse_workload(name);
      if (!w) throw Error(ErrorCode::kConfig, "unknown workload '" + name + "'");
      c.workloads.push_back(*w);
    }
    if (c.workloads.empty()) throw Error(ErrorCode::kConfig, "workloads must not be empty");
  } else if (key == "parts") {
    c.parts = parse_unsigned<std::uint32_t>(key, value);
    if (c.parts == 0) throw Error(ErrorCode::kConfig, "parts must be positive");
  } else if (key == "part_size") {
    c.part_size = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "plan") {
    try {
      engine::FaultPlan::parse_outcomes(value);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, std::string("plan: ") + e.what());
    }
    c.fault_plan = value;
  } else if (key == "speculation_threshold") {
    c.speculation_threshold = parse_unsigned<store::Tick>(key, value);
  } else if (key == "abort_cleanup") {
    c.abort_cleanup = parse_bool(key, value);
  } else if (key == "random_seed") {
    c.random_faults_seed = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "class_a") {
    c.matrix.pricing.class_a = parse_double(key, value);
    c.matrix.pricing.validate();
  } else if (key == "class_b") {
    c.matrix.pricing.class_b = parse_double(key, value);
    c.matrix.pricing.validate();
  } else if (key == "format") {
    const auto f = parse_format(value);
    if (!f) throw Error(ErrorCode::kConfig, "unknown format '" + value + "'");
    c.format = *f;
  } else if (key == "repeats") {
    c.matrix.repeats = parse_unsigned<std::uint32_t>(key, value);
    if (c.matrix.repeats == 0) throw Error(ErrorCode::kConfig, "repeats must be positive");
  } else if (key == "seed") {
    c.matrix.seed = parse_unsigned<std::uint64_t>(key, value);
  } else {
    throw Error(ErrorCode::kConfig, "unknown setting " + key);
  }
}

HarnessConfig parse_config(std::string_view text) {
  HarnessConfig config;
  std::string section;
  std::size_t lineno = 0;
  for (std::size_t start = 0; start <= text.size();) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::kConfig, where + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      const auto& keys = config_keys();
      if (std::none_of(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.section == section; })) {
        throw Error(ErrorCode::kConfig, where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kConfig, where + "expected key = value");
    if (section.empty()) throw Error(ErrorCode::kConfig, where + "setting outside a section");
    try {
      apply_setting(config, section + "." + trim(std::string_view(line).substr(0, eq)),
                    std::string_view(line).substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, where + e.what());
    }
  }
  return config;
}

std::vector<Workload> HarnessConfig::build_workloads() const {
  std::vector<Workload> out;
  for (WorkloadKind kind : workloads) {
    Workload w;
    switch (kind) {
      case WorkloadKind::kSingleTask: w = Workload::single_task(); break;
      case WorkloadKind::kThreeTask: w = Workload::three_task(); break;
      case WorkloadKind::kWriteOnly: w = Workload::write_only(parts, part_size); break;
      case WorkloadKind::kCopy: w = Workload::copy(parts, part_size); break;
      case WorkloadKind::kReadOnly: w = Workload::read_only(parts, part_size); break;
    }
    w.consistency = consistency;
    if (random_faults_seed) w.faults = engine::FaultPlan::random(*random_faults_seed, w.parts);
    if (fault_plan) w.faults.outcomes = engine::FaultPlan::parse_outcomes(*fault_plan);
    if (speculation_threshold) w.faults.speculation_threshold = *speculation_threshold;
    if (abort_cleanup) w.faults.abort_cleanup = *abort_cleanup;
    out.push_back(std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<HazardVerdict> run_hazard_demo(const store::ConsistencyPolicy& policy, std::uint32_t parts,
                                           std::uint64_t part_size) {
  struct Case {
    Scenario scenario;
    stocator::ReadOption read;
  };
  const Case cases[] = {{Scenario::kHsBase, stocator::ReadOption::kListing},
                        {Scenario::kHsCv2, stocator::ReadOption::kListing},
                        {Scenario::kS3aBase, stocator::ReadOption::kListing},
                        {Scenario::kS3aCv2, stocator::ReadOption::kListing},
                        {Scenario::kStocator, stocator::ReadOption::kListing},
                        {Scenario::kStocator, stocator::ReadOption::kManifest}};
  Workload w = Workload::write_only(parts, part_size);
  w.consistency = policy;
  std::vector<HazardVerdict> out;
  for (const auto& c : cases) {
    MatrixOptions options;
    options.stocator_read_option = c.read;
    store::ObjectStore store(policy);
    const auto run = run_cell_on(store, w, c.scenario, options, 0);
    HazardVerdict v;
    v.label = std::string(to_string(c.scenario));
    if (c.scenario == Scenario::kStocator) v.label += "/" + std::string(stocator::to_string(c.read));
    v.wrote_success = run.cell.run.wrote_success;
    v.complete = run.cell.run.complete;
    v.parts_readable = run.cell.run.parts_readable;
    v.expected_parts = run.cell.run.expected_parts;

    // Let every listing catch up, then read again with a fresh connector.
    store.advance(std::max(policy.create_listing_lag, policy.delete_listing_lag) + 1);
    store.set_trace_enabled(false);
    auto reader = run.factory(store);
    const auto read = engine::read_dataset(*reader, run.spec.dataset, run.spec.read_option);
    for (const auto& part : read.parts) {
      for (const auto& spec_part : run.spec.parts) {
        if (engine::part_name(spec_part.index) == part.part && part.data &&
            *part.data == engine::canonical_body(spec_part.seed, spec_part.size)) {
          ++v.settled_readable;
        }
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace stolab::harness
