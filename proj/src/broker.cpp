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

#include "jamus/broker.hpp"

#include <utility>

#include "jamus/errors.hpp"

namespace jamus {

std::string to_string(ConflictReason reason) {
  switch (reason) {
    case ConflictReason::NoMatchingCapacity: return "no_matching_capacity";
    case ConflictReason::PermissionDenied: return "permission_denied";
    case ConflictReason::QuotaExceeded: return "quota_exceeded";
  }
  return "?";
}

std::optional<std::size_t> PlatformCapacity::match_entry(
    const ResourcePattern& pattern) const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const CapacityEntry& entry = entries[i];
    if (entry.pattern.kind() != pattern.kind()) continue;
    if (!subsumes(entry.pattern, pattern)) continue;
    if (!best) {
      best = i;
      continue;
    }
    const CapacityEntry& incumbent = entries[*best];
    int cur = specificity(entry.pattern);
    int inc = specificity(incumbent.pattern);
    if (cur > inc ||
        (cur == inc && sort_key(entry.pattern) < sort_key(incumbent.pattern))) {
      best = i;
    }
  }
  return best;
}

EvaluationResult evaluate_contract(const PlatformCapacity& capacity,
                                   const Contract& contract) {
  // Scratch remaining quotas: reservation clauses deduct sequentially so a
  // later clause sees what earlier clauses of this same contract left over.
  std::vector<Quota> scratch;
  scratch.reserve(capacity.entries.size());
  for (const CapacityEntry& entry : capacity.entries) {
    scratch.push_back(entry.remaining);
  }

  EvaluationResult result;
  result.report.contract_id = contract.id;
  for (const ResourceUtilisationProfile& profile : contract.profiles) {
    auto idx = capacity.match_entry(profile.pattern);
    if (!idx) {
      result.report.conflicts.push_back(
          {profile.id, ConflictReason::NoMatchingCapacity, std::nullopt});
      continue;
    }
    const CapacityEntry& entry = capacity.entries[*idx];
    if (!entry.permission.covers(profile.permission)) {
      result.report.conflicts.push_back(
          {profile.id, ConflictReason::PermissionDenied, std::nullopt});
      continue;
    }
    if (!profile.quota.fits_within(scratch[*idx])) {
      result.report.conflicts.push_back(
          {profile.id, ConflictReason::QuotaExceeded, scratch[*idx]});
      continue;
    }
    if (profile.policy == AvailabilityPolicy::Reservation) {
      scratch[*idx] = scratch[*idx].minus(profile.quota);
      result.deductions.push_back({*idx, profile.quota});
    }
  }
  result.report.accepted = result.report.conflicts.empty();
  if (!result.report.accepted) {
    result.deductions.clear();
  }
  return result;
}

Broker::Broker(PlatformCapacity capacity) : capacity_(std::move(capacity)) {}

SubmissionReport Broker::evaluate(const Contract& contract) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return evaluate_contract(capacity_, contract).report;
}

std::vector<ConflictingClause> Broker::conflicting_clauses(
    const Contract& contract) const {
  return evaluate(contract).conflicts;
}

SubmissionReport Broker::subscribe(const Contract& contract) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (reservations_.count(contract.id) > 0) {
    throw ProtocolError(ProtocolError::Code::AlreadySubscribed,
                        "contract already subscribed: " + contract.id);
  }
  EvaluationResult result = evaluate_contract(capacity_, contract);
  if (result.report.accepted) {
    for (const Deduction& d : result.deductions) {
      CapacityEntry& entry = capacity_.entries[d.entry_index];
      entry.remaining = entry.remaining.minus(d.amount);
    }
    reservations_.emplace(contract.id,
                          Reservation{contract.id, std::move(result.deductions)});
  }
  return result.report;
}

void Broker::release(const ContractId& contract_id) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = reservations_.find(contract_id);
  if (it == reservations_.end()) {
    throw ProtocolError(ProtocolError::Code::AlreadyReleased,
                        "no live reservation for contract: " + contract_id);
  }
  for (const Deduction& d : it->second.deductions) {
    CapacityEntry& entry = capacity_.entries[d.entry_index];
    entry.remaining = entry.remaining.plus(d.amount);
  }
  reservations_.erase(it);
}

SubmissionReport Broker::amend_subscription(const Contract& current,
                                            const Contract& amended) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = reservations_.find(current.id);
  if (it == reservations_.end()) {
    throw ProtocolError(ProtocolError::Code::NotSubscribed,
                        "contract not subscribed: " + current.id);
  }
  // Virtually hand the current holdings back before re-evaluating, so the
  // amended contract is judged against capacity that includes them.
  PlatformCapacity scratch = capacity_;
  for (const Deduction& d : it->second.deductions) {
    CapacityEntry& entry = scratch.entries[d.entry_index];
    entry.remaining = entry.remaining.plus(d.amount);
  }
  EvaluationResult result = evaluate_contract(scratch, amended);
  if (result.report.accepted) {
    for (const Deduction& d : result.deductions) {
      CapacityEntry& entry = scratch.entries[d.entry_index];
      entry.remaining = entry.remaining.minus(d.amount);
    }
    capacity_ = std::move(scratch);
    it->second.deductions = std::move(result.deductions);
  }
  return result.report;
}

bool Broker::subscribed(const ContractId& contract_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return reservations_.count(contract_id) > 0;
}

std::optional<Reservation> Broker::reservation(
    const ContractId& contract_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = reservations_.find(contract_id);
  if (it == reservations_.end()) return std::nullopt;
  return it->second;
}

PlatformCapacity Broker::capacity_snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return capacity_;
}

std::optional<Quota> Broker::remaining_for(const ResourcePattern& pattern) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto idx = capacity_.match_entry(pattern);
  if (!idx) return std::nullopt;
  return capacity_.entries[*idx].remaining;
}

}  // namespace jamus
