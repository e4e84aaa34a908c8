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

#include "jamus/access.hpp"
#include "jamus/pattern.hpp"
#include "jamus/step.hpp"
#include "jamus/violation.hpp"

namespace jamus {

enum class SanctionAction {
  Reject,  // deny the offending access
  Lock,    // additionally lock every matching handle and veto new ones
};

std::string to_string(SanctionAction action);

/// Punitive rule attached to a container. Immediate sanctions strike on the
/// first violation of their pattern. Deferred sanctions tolerate
/// threshold - 1 consecutive violations, each answered with a warning, and
/// apply on the threshold-th; a conformant access to a matching resource
/// resets the count.
struct Sanction {
  enum class Kind { Immediate, Deferred };

  Kind kind = Kind::Immediate;
  ResourcePattern pattern;
  SanctionAction action = SanctionAction::Reject;
  int threshold = 1;  // deferred only; >= 1
};

std::string to_string(Sanction::Kind kind);

/// Per-container sanction state: which rules exist, how many consecutive
/// violations each has seen, and which have been applied for good. Once a
/// lock-style sanction is applied, even conformant accesses to matching
/// resources are denied.
class SanctionEngine {
 public:
  struct Status {
    Sanction sanction;
    int consecutive = 0;      // live counter (deferred)
    int warnings_issued = 0;  // deferred warnings sent so far
    int fired = 0;            // times the action was executed
    bool applied = false;     // permanent from here on
    std::optional<std::uint64_t> applied_step;
  };

  /// Verdict, optional warning to forward, and the sanction pattern when an
  /// action with persistent effect (lock) fired on this very violation.
  struct Outcome {
    AccessVerdict verdict;
    std::optional<Warning> warning;
    std::optional<ResourcePattern> lock_pattern;
    bool sanction_applied = false;  // a sanction became permanent just now
  };

  SanctionEngine(ComponentId component, std::vector<Sanction> sanctions);

  /// Decides the verdict for a violating access. `base_reason` is the deny
  /// reason of the violation itself (quota, permission, no_profile); it is
  /// kept on the returned verdict so traces attribute the denial to its
  /// cause even when a sanction escalates reject to lock.
  Outcome on_violation(const ViolationEvent& violation, DenyReason base_reason);

  /// Resets consecutive counters of matching, not-yet-applied deferred
  /// sanctions.
  void on_conformant_access(const ResourceDescriptor& descriptor);

  /// Standing denial for resources matching an applied sanction, checked
  /// before any contract logic. Empty when no applied sanction matches.
  std::optional<AccessVerdict> standing_verdict(
      const ResourceDescriptor& descriptor) const;

  bool any_applied() const;
  const std::vector<Status>& status() const { return status_; }

 private:
  /// Most specific matching sanction; ties go to the earliest configured.
  std::optional<std::size_t> select(const ResourceDescriptor& descriptor) const;

  ComponentId component_;
  std::vector<Status> status_;
};

}  // namespace jamus
