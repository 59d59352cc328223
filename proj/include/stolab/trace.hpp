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

#include <string>
#include <string_view>
#include <vector>

#include "stolab/store.hpp"

namespace stolab::store {

// JSONL encoding of store events: one object per line with the fields
// tick, kind, container, name, length, src (in that order).
std::string to_jsonl(const std::vector<StoreEvent>& events);
std::string to_json_line(const StoreEvent& event);
std::vector<StoreEvent> parse_jsonl(std::string_view text);

// Rebuilds operation counts and byte counters from a trace. peak_staged is
// client-side state and is not recoverable from store events.
OpTally replay(const std::vector<StoreEvent>& events);

}  // namespace stolab::store
