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

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "jamus/contract.hpp"
#include "jamus/pattern.hpp"

namespace jamus {

/// One slice of platform capacity: resources matching the pattern may be
/// used with at most these permissions, drawing from a shared quota pool.
struct CapacityEntry {
  ResourcePattern pattern;
  AccessPermission permission;
  Quota initial;
  Quota remaining;
};

struct PlatformCapacity {
  std::vector<CapacityEntry> entries;

  /// Most specific entry whose pattern subsumes the requested one; ties are
  /// broken by the lexicographically smallest rendered pattern.
  std::optional<std::size_t> match_entry(const ResourcePattern& pattern) const;
};

enum class ConflictReason { NoMatchingCapacity, PermissionDenied, QuotaExceeded };

std::string to_string(ConflictReason reason);

/// Why a clause cannot be honoured. For quota conflicts, `available` reports
/// what the matched entry could still offer when the clause was considered.
struct ConflictingClause {
  ProfileId profile_id;
  ConflictReason reason = ConflictReason::NoMatchingCapacity;
  std::optional<Quota> available;
};

struct SubmissionReport {
  ContractId contract_id;
  bool accepted = false;
  std::vector<ConflictingClause> conflicts;
};

/// Capacity actually deducted for one reservation clause.
struct Deduction {
  std::size_t entry_index = 0;
  Quota amount;
};

struct Reservation {
  ContractId contract_id;
  std::vector<Deduction> deductions;
};

/// Side-effect-free admission check of a whole contract against a capacity
/// snapshot. Clauses are examined in contract order against a scratch copy,
/// so several reservation clauses drawing on one entry are charged
/// cumulatively; best-effort clauses are checked but never deducted.
struct EvaluationResult {
  SubmissionReport report;
  std::vector<Deduction> deductions;  // empty unless report.accepted
};

EvaluationResult evaluate_contract(const PlatformCapacity& capacity,
                                   const Contract& contract);

/// Resource broker: owns the platform capacity ledger, answers admission
/// queries and carries out reservations. All public operations are atomic
/// with respect to each other.
class Broker {
 public:
  explicit Broker(PlatformCapacity capacity);

  /// Admission check only; never changes the ledger.
  SubmissionReport evaluate(const Contract& contract) const;
  std::vector<ConflictingClause> conflicting_clauses(const Contract& contract) const;

  /// Re-evaluates and, when accepted, deducts every reservation clause in
  /// one step. Rejection leaves the ledger untouched.
  SubmissionReport subscribe(const Contract& contract);

  /// Returns a subscription's deductions to the pool.
  void release(const ContractId& contract_id);

  /// Admission check of `amended` with `current`'s own holdings virtually
  /// returned first, so a contract never competes against itself. On
  /// acceptance the old reservation is swapped for the new one atomically.
  SubmissionReport amend_subscription(const Contract& current,
                                      const Contract& amended);

  bool subscribed(const ContractId& contract_id) const;
  std::optional<Reservation> reservation(const ContractId& contract_id) const;
  PlatformCapacity capacity_snapshot() const;

  /// Remaining quota of the entry a profile pattern maps to, if any. Used by
  /// containers to probe capacity for best-effort clauses at access time.
  std::optional<Quota> remaining_for(const ResourcePattern& pattern) const;

 private:
  mutable std::mutex mutex_;
  PlatformCapacity capacity_;
  std::map<ContractId, Reservation> reservations_;
};

}  // namespace jamus
