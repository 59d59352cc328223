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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "stolab/error.hpp"
#include "stolab/fs_path.hpp"
#include "stolab/harness.hpp"
#include "stolab/store.hpp"
#include "stolab/trace.hpp"

namespace py = pybind11;
using namespace stolab;

namespace {

py::dict tally_dict(const store::OpTally& t) {
  py::dict d;
  for (auto kind : store::kAllOpKinds) d[py::str(std::string(store::to_string(kind)))] = t.count(kind);
  d["total"] = t.total();
  d["bytes_put"] = t.bytes_put;
  d["bytes_got"] = t.bytes_got;
  d["bytes_copied"] = t.bytes_copied;
  d["peak_staged"] = t.peak_staged;
  return d;
}

py::bytes to_py(const store::Bytes& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

harness::Scenario scenario_arg(const std::string& name) {
  auto s = harness::parse_scenario(name);
  if (!s) throw Error(ErrorCode::kConfig, "unknown scenario '" + name + "'");
  return *s;
}

harness::Workload workload_arg(const std::string& name, std::uint32_t parts, std::uint64_t part_size) {
  auto kind = harness::parse_workload(name);
  if (!kind) throw Error(ErrorCode::kConfig, "unknown workload '" + name + "'");
  switch (*kind) {
    case harness::WorkloadKind::kSingleTask: return harness::Workload::single_task();
    case harness::WorkloadKind::kThreeTask: return harness::Workload::three_task();
    case harness::WorkloadKind::kWriteOnly: return harness::Workload::write_only(parts, part_size);
    case harness::WorkloadKind::kCopy: return harness::Workload::copy(parts, part_size);
    case harness::WorkloadKind::kReadOnly: return harness::Workload::read_only(parts, part_size);
  }
  return {};
}

py::dict cell_dict(const harness::CellReport& cell) {
  py::dict d;
  d["scenario"] = std::string(harness::to_string(cell.scenario));
  d["workload"] = cell.workload.label();
  d["tally"] = tally_dict(cell.run.tally);
  d["cost"] = cell.run.cost;
  d["wrote_success"] = cell.run.wrote_success;
  d["complete"] = cell.run.complete;
  d["parts_readable"] = cell.run.parts_readable;
  d["expected_parts"] = cell.run.expected_parts;
  d["events"] = harness::all_event_lines(cell.run.trace);
  return d;
}

}  // namespace

PYBIND11_MODULE(_stolab, m) {
  m.doc() = "In-memory object store, connectors and job engine";

  static py::exception<Error> exc(m, "StolabError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<store::ConsistencyPolicy>(m, "ConsistencyPolicy")
      .def(py::init([](store::Tick create_lag, store::Tick delete_lag, bool strong) {
             return store::ConsistencyPolicy{create_lag, delete_lag, strong};
           }),
           py::arg("create_listing_lag") = 0, py::arg("delete_listing_lag") = 0,
           py::arg("read_after_write_strong") = true)
      .def_readwrite("create_listing_lag", &store::ConsistencyPolicy::create_listing_lag)
      .def_readwrite("delete_listing_lag", &store::ConsistencyPolicy::delete_listing_lag)
      .def_readwrite("read_after_write_strong", &store::ConsistencyPolicy::read_after_write_strong);

  py::class_<store::ObjectStore>(m, "ObjectStore")
      .def(py::init<store::ConsistencyPolicy>(), py::arg("policy") = store::ConsistencyPolicy{})
      .def("put", [](store::ObjectStore& s, const std::string& container, const std::string& name,
                     const py::bytes& body) {
             const std::string raw = body;
             s.put_bytes({container, name},
                         std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
           })
      .def("get", [](store::ObjectStore& s, const std::string& container, const std::string& name) {
             return to_py(*s.get_object({container, name}).data);
           })
      .def("head", [](store::ObjectStore& s, const std::string& container, const std::string& name) {
             const auto h = s.head_object({container, name});
             py::dict d;
             d["length"] = h.length;
             d["created_at"] = h.created_at;
             d["metadata"] = h.metadata;
             return d;
           })
      .def("list", [](store::ObjectStore& s, const std::string& container, const std::string& prefix) {
             std::vector<std::string> names;
             for (const auto& e : s.list_container(container, prefix).objects) names.push_back(e.name);
             return names;
           }, py::arg("container"), py::arg("prefix") = "")
      .def("delete", [](store::ObjectStore& s, const std::string& container, const std::string& name) {
             s.delete_object({container, name});
           })
      .def("copy", [](store::ObjectStore& s, const std::string& container, const std::string& src,
                      const std::string& dst) { s.copy_object({container, src}, {container, dst}); })
      .def("advance", &store::ObjectStore::advance)
      .def_property_readonly("now", &store::ObjectStore::now)
      .def("tally", [](const store::ObjectStore& s) { return tally_dict(s.snapshot_tally()); })
      .def("reset_tally", &store::ObjectStore::reset_tally)
      .def("trace_jsonl", [](const store::ObjectStore& s) { return store::to_jsonl(s.trace()); });

  m.def("replay_jsonl", [](const std::string& text) { return tally_dict(store::replay(store::parse_jsonl(text))); },
        "Rebuild operation counts from a JSONL trace.");

  m.def("final_name_for", [](const std::string& path) {
        const auto match = fs::match_temp_pattern(fs::FsPath::parse(path));
        if (!match) throw Error(ErrorCode::kMissingPart, "not a temporary path: " + path);
        return fs::final_name_for(*match).str();
      }, py::arg("path"), "Final object path for a task temporary part file.");

  m.def("temp_depth", [](const std::string& path) -> py::object {
        const auto match = fs::match_temp_pattern(fs::FsPath::parse(path));
        if (!match) return py::none();
        return py::str(std::string(fs::to_string(match->depth)));
      }, py::arg("path"));

  m.def("scenarios", [] {
    std::vector<std::string> names;
    for (auto s : harness::kAllScenarios) names.emplace_back(harness::to_string(s));
    return names;
  });

  m.def("run_cell",
        [](const std::string& workload, const std::string& scenario, std::uint32_t parts, std::uint64_t part_size,
           store::ConsistencyPolicy policy, const std::string& read_option, std::uint64_t seed) {
          auto w = workload_arg(workload, parts, part_size);
          w.consistency = policy;
          harness::MatrixOptions options;
          options.seed = seed;
          const auto read = stocator::parse_read_option(read_option);
          if (!read) throw Error(ErrorCode::kConfig, "unknown read option '" + read_option + "'");
          options.stocator_read_option = *read;
          const auto which = scenario_arg(scenario);
          harness::CellReport cell;
          {
            py::gil_scoped_release release;
            cell = harness::run_cell(w, which, options);
          }
          return cell_dict(cell);
        },
        py::arg("workload"), py::arg("scenario"), py::arg("parts") = 8, py::arg("part_size") = 1024,
        py::arg("policy") = store::ConsistencyPolicy{}, py::arg("read_option") = "listing", py::arg("seed") = 42,
        "Run one workload under one scenario on a fresh store.");

  m.def("run_config", [](const std::string& text) {
        const auto config = harness::parse_config(text);
        const auto cells = harness::run_matrix(config.build_workloads(), config.scenarios, config.matrix);
        return harness::render_report(cells, config.format);
      }, py::arg("text"), "Run the matrix described by an INI config and return the rendered report.");

  m.def("parse_csv_report", [](const std::string& text) {
    py::list rows;
    for (const auto& r : harness::parse_csv_report(text)) {
      py::dict d;
      d["scenario"] = r.scenario;
      d["workload"] = r.workload;
      d["total"] = r.total;
      d["cost"] = r.cost;
      d["complete"] = r.complete;
      rows.append(d);
    }
    return rows;
  });
}
