// Copyright 2026 The Jamus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jamus/scenario.hpp"

namespace jamus {

/// One disagreement between a trace and its scenario replay.
struct Discrepancy {
  std::size_t line = 0;  // 1-based trace line; 0 for stream-level problems
  std::string message;
};

/// Replays the scenario with an independent re-implementation of the
/// enforcement rules and walks the trace in lockstep, checking every event's
/// shape, order, numbering and verdict. The runtime proper is not consulted,
/// so a defect there cannot vouch for its own output. An empty result means
/// the trace is exactly what the scenario must produce; `seed` must repeat
/// the one given to the run, if any.
std::vector<Discrepancy> verify_trace(const std::string& trace_text,
                                      const Scenario& scenario,
                                      std::optional<std::uint64_t> seed = {});

}  // namespace jamus
