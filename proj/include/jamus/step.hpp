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

namespace jamus {

/// Monotonic logical clock. All ledger entries, violations and warnings are
/// stamped with a step number instead of wall-clock time so that replays of
/// the same scenario produce byte-identical output.
class StepCounter {
 public:
  std::uint64_t next() { return ++value_; }
  std::uint64_t current() const { return value_; }

 private:
  std::uint64_t value_ = 0;
};

}  // namespace jamus
