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

#include "jamus/access.hpp"
#include "jamus/bytes.hpp"
#include "jamus/descriptor.hpp"

namespace jamus {

enum class ViolationKind {
  Quota,       // access would push consumption past the profile quota
  Permission,  // access kind not granted, or no profile covers the resource
};

std::string to_string(ViolationKind kind);

/// One non-conformant access attempt, as judged by the supervising monitor.
/// Vetoed creations carry no access kind.
struct ViolationEvent {
  ComponentId component;
  std::optional<ProfileId> profile;  // empty when no profile matched at all
  ResourceDescriptor descriptor;
  std::optional<AccessKind> access;
  Bytes amount = 0;
  ViolationKind kind = ViolationKind::Permission;
  std::uint64_t step = 0;
};

/// Message pushed to a component's inbox: either a sanction warning (your
/// next violation of this pattern may trigger the sanction) or a best-effort
/// denial notice (the platform currently lacks capacity; no fault recorded).
struct Warning {
  enum class Kind { SanctionWarning, BestEffortDenial };

  Kind kind = Kind::SanctionWarning;
  ComponentId component;
  std::string pattern;  // rendered sanction or profile pattern
  int count = 0;        // consecutive violations so far (sanction warnings)
  int threshold = 0;    // violations needed to apply the sanction
  std::uint64_t step = 0;
  std::string message;
};

std::string to_string(Warning::Kind kind);

}  // namespace jamus
