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

#include "jamus/sanctions.hpp"

#include <utility>

namespace jamus {

std::string to_string(SanctionAction action) {
  switch (action) {
    case SanctionAction::Reject: return "reject";
    case SanctionAction::Lock: return "lock";
  }
  return "?";
}

std::string to_string(Sanction::Kind kind) {
  switch (kind) {
    case Sanction::Kind::Immediate: return "immediate";
    case Sanction::Kind::Deferred: return "deferred";
  }
  return "?";
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Quota: return "quota";
    case ViolationKind::Permission: return "permission";
  }
  return "?";
}

std::string to_string(Warning::Kind kind) {
  switch (kind) {
    case Warning::Kind::SanctionWarning: return "sanction_warning";
    case Warning::Kind::BestEffortDenial: return "best_effort_denial";
  }
  return "?";
}

SanctionEngine::SanctionEngine(ComponentId component,
                               std::vector<Sanction> sanctions)
    : component_(std::move(component)) {
  status_.reserve(sanctions.size());
  for (Sanction& sanction : sanctions) {
    Status status;
    status.sanction = std::move(sanction);
    status_.push_back(std::move(status));
  }
}

std::optional<std::size_t> SanctionEngine::select(
    const ResourceDescriptor& descriptor) const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < status_.size(); ++i) {
    const ResourcePattern& pattern = status_[i].sanction.pattern;
    if (!matches(pattern, descriptor)) continue;
    // Strictly more specific wins; equal specificity keeps the earliest
    // configured sanction.
    if (!best ||
        specificity(pattern) > specificity(status_[*best].sanction.pattern)) {
      best = i;
    }
  }
  return best;
}

SanctionEngine::Outcome SanctionEngine::on_violation(
    const ViolationEvent& violation, DenyReason base_reason) {
  Outcome outcome;
  outcome.verdict = AccessVerdict::reject(base_reason);
  auto idx = select(violation.descriptor);
  if (!idx) {
    return outcome;
  }
  Status& status = status_[*idx];
  const Sanction& sanction = status.sanction;

  auto fire = [&] {
    ++status.fired;
    if (sanction.action == SanctionAction::Lock) {
      outcome.verdict = AccessVerdict::lock(base_reason);
      outcome.lock_pattern = sanction.pattern;
    } else {
      outcome.verdict = AccessVerdict::reject(base_reason);
    }
  };

  auto apply = [&] {
    if (!status.applied) {
      status.applied = true;
      status.applied_step = violation.step;
      outcome.sanction_applied = true;
    }
  };

  if (status.applied) {
    // Normally unreachable: standing_verdict() denies first. Keep the
    // sanction's effect anyway.
    fire();
    return outcome;
  }

  if (sanction.kind == Sanction::Kind::Immediate) {
    fire();
    if (sanction.action == SanctionAction::Lock) {
      apply();  // a lock persists, so the sanction is applied from now on
    }
    return outcome;
  }

  ++status.consecutive;
  if (status.consecutive >= sanction.threshold) {
    fire();
    apply();
    return outcome;
  }

  ++status.warnings_issued;
  Warning warning;
  warning.kind = Warning::Kind::SanctionWarning;
  warning.component = component_;
  warning.pattern = to_string(sanction.pattern);
  warning.count = status.consecutive;
  warning.threshold = sanction.threshold;
  warning.step = violation.step;
  warning.message = "consecutive violation " +
                    std::to_string(status.consecutive) + "/" +
                    std::to_string(sanction.threshold) + " on " +
                    warning.pattern + "; sanction " +
                    to_string(sanction.action) + " applies at " +
                    std::to_string(sanction.threshold);
  outcome.warning = std::move(warning);
  return outcome;
}

void SanctionEngine::on_conformant_access(const ResourceDescriptor& descriptor) {
  for (Status& status : status_) {
    if (status.sanction.kind != Sanction::Kind::Deferred) continue;
    if (status.applied) continue;
    if (matches(status.sanction.pattern, descriptor)) {
      status.consecutive = 0;
    }
  }
}

std::optional<AccessVerdict> SanctionEngine::standing_verdict(
    const ResourceDescriptor& descriptor) const {
  bool rejected = false;
  for (const Status& status : status_) {
    if (!status.applied) continue;
    if (!matches(status.sanction.pattern, descriptor)) continue;
    if (status.sanction.action == SanctionAction::Lock) {
      return AccessVerdict::lock(DenyReason::Sanction);
    }
    rejected = true;
  }
  if (rejected) {
    return AccessVerdict::reject(DenyReason::Sanction);
  }
  return std::nullopt;
}

bool SanctionEngine::any_applied() const {
  for (const Status& status : status_) {
    if (status.applied) return true;
  }
  return false;
}

}  // namespace jamus
