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

/// Byte quantities are plain unsigned counts; quotas and ledgers never go
/// negative by construction.
using Bytes = std::uint64_t;

inline constexpr Bytes Ko = 1024;
inline constexpr Bytes Mo = 1024 * 1024;

}  // namespace jamus
