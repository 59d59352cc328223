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

#include "stolab/trace.hpp"

#include <sstream>

#include <json.hpp>

#include "stolab/error.hpp"

namespace stolab::store {

using Json = nlohmann::ordered_json;

std::string to_json_line(const StoreEvent& event) {
  Json j;
  j["tick"] = event.tick;
  j["kind"] = std::string(to_string(event.kind));
  j["container"] = event.container;
  j["name"] = event.name;
  j["length"] = event.length;
  j["src"] = event.src;
  return j.dump();
}

std::string to_jsonl(const std::vector<StoreEvent>& events) {
  std::string out;
  for (const StoreEvent& event : events) {
    out += to_json_line(event);
    out += '\n';
  }
  return out;
}

std::vector<StoreEvent> parse_jsonl(std::string_view text) {
  std::vector<StoreEvent> events;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      StoreEvent event;
      event.tick = j.at("tick").get<Tick>();
      const auto kind = parse_op_kind(j.at("kind").get<std::string>());
      if (!kind) throw Error(ErrorCode::kUnknownFormat, "unknown op kind on line " + std::to_string(line_no));
      event.kind = *kind;
      event.container = j.at("container").get<std::string>();
      event.name = j.at("name").get<std::string>();
      event.length = j.at("length").get<std::uint64_t>();
      event.src = j.value("src", std::string{});
      events.push_back(std::move(event));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kUnknownFormat, "trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return events;
}

OpTally replay(const std::vector<StoreEvent>& events) {
  OpTally tally;
  for (const StoreEvent& event : events) {
    ++tally.count(event.kind);
    switch (event.kind) {
      case RestOpKind::kPutObject: tally.bytes_put += event.length; break;
      case RestOpKind::kGetObject: tally.bytes_got += event.length; break;
      case RestOpKind::kCopyObject: tally.bytes_copied += event.length; break;
      default: break;
    }
  }
  return tally;
}

}  // namespace stolab::store
