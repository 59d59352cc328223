# Copyright 2026 The stolab Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Object-store connector lab."""

from ._stolab import (
    ConsistencyPolicy,
    ObjectStore,
    StolabError,
    final_name_for,
    parse_csv_report,
    replay_jsonl,
    run_cell,
    run_config,
    scenarios,
    temp_depth,
)

__all__ = [
    "ConsistencyPolicy",
    "ObjectStore",
    "StolabError",
    "final_name_for",
    "parse_csv_report",
    "replay_jsonl",
    "run_cell",
    "run_config",
    "scenarios",
    "temp_depth",
]
