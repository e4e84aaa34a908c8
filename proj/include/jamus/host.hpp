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
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "jamus/scenario.hpp"

namespace jamus {

/// Scheduling source shared by the runner and the trace verifier: the same
/// seed must reproduce the same interleaving decisions on both sides.
class ScheduleRng {
 public:
  explicit ScheduleRng(std::uint64_t seed) : gen_(seed) {}

  /// Picks an index in [0, n). mt19937_64 output is fully specified, so the
  /// schedule is reproducible across builds.
  std::size_t pick(std::size_t n) {
    return static_cast<std::size_t>(gen_() % n);
  }

 private:
  std::mt19937_64 gen_;
};

struct RunOptions {
  /// Without a seed, components interleave round-robin in declaration
  /// order; with one, each turn goes to a seeded-random alive component.
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  nlohmann::json report;
  std::string trace_text;  // header plus one line per resource event
  int exit_code = 0;       // 0 clean, 3 when a sanction was applied for good
};

/// Runs a validated scenario to completion. Deterministic: the same scenario
/// and options produce byte-identical trace and report.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace jamus
