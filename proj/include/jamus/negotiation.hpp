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
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "jamus/amendment.hpp"
#include "jamus/broker.hpp"
#include "jamus/contract.hpp"
#include "jamus/step.hpp"

namespace jamus {

/// Life cycle of a contract proposal. Submission only asks whether the
/// platform could host the contract; subscription makes it binding. Between
/// the two the platform may have promised its capacity elsewhere, so a
/// subscription re-evaluates and can still be turned down.
enum class ContractState {
  Submitted,
  RejectedAtSubmission,
  Accepted,
  Subscribed,
  RejectedAtSubscription,
  Terminated,
};

std::string to_string(ContractState state);

/// True iff the state machine allows this edge. Subscribed -> Subscribed is
/// the amendment loop.
bool valid_transition(ContractState from, ContractState to);

/// One protocol interaction, kept for reporting.
struct NegotiationRecord {
  std::uint64_t step = 0;
  std::string operation;  // "submit", "subscribe", "amend", "terminate"
  ContractId contract_id;
  std::optional<SubmissionReport> report;
  ContractState state_after = ContractState::Submitted;
};

/// Everything the manager knows about one component.
struct ComponentLedger {
  std::map<ContractId, Contract> contracts;
  std::map<ContractId, ContractState> states;
  std::optional<ContractId> subscribed;
  std::vector<NegotiationRecord> history;
};

/// Front desk of the negotiation protocol. Tracks every proposal a component
/// has made, enforces the contract state machine and the one-subscription
/// rule, and drives the broker for admission and reservation. Hooks let the
/// hosting layer react when a contract becomes, changes, or stops being the
/// component's binding contract.
class ContractManager {
 public:
  struct Hooks {
    virtual ~Hooks() = default;
    virtual void on_subscribed(const ComponentId&, const Contract&) {}
    virtual void on_amended(const ComponentId&, const Contract&) {}
    virtual void on_terminated(const ComponentId&) {}
  };

  explicit ContractManager(Broker& broker, StepCounter& steps,
                           Hooks* hooks = nullptr);

  /// Phase one: admission check only. The proposal is recorded either as
  /// Accepted or RejectedAtSubmission. Contract ids must be fresh.
  SubmissionReport submit(const ComponentId& component, Contract contract);

  /// Phase two: re-evaluation plus reservation of an Accepted proposal.
  /// A component holds at most one subscription at a time.
  SubmissionReport subscribe(const ComponentId& component,
                             const ContractId& contract_id);

  /// Applies an amendment to the subscribed contract: clause errors throw
  /// AmendmentError, admission conflicts reject the amendment, and in both
  /// cases the current contract stays in force untouched.
  SubmissionReport amend(const ComponentId& component,
                         const Amendment& amendment);

  /// Ends the subscription and returns its reserved capacity.
  void terminate(const ComponentId& component);

  bool has_subscription(const ComponentId& component) const;
  const Contract& subscribed_contract(const ComponentId& component) const;
  ContractState state(const ComponentId& component,
                      const ContractId& contract_id) const;
  std::vector<ComponentId> components() const;
  const ComponentLedger& ledger(const ComponentId& component) const;

 private:
  void record(ComponentLedger& ledger, std::string operation,
              const ContractId& contract_id,
              std::optional<SubmissionReport> report, ContractState after);
  void transition(ComponentLedger& ledger, const ContractId& contract_id,
                  ContractState to);

  mutable std::mutex mutex_;
  Broker& broker_;
  StepCounter& steps_;
  Hooks* hooks_;
  std::map<ComponentId, ComponentLedger> ledgers_;
  std::map<ContractId, ComponentId> owners_;  // global contract id freshness
};

}  // namespace jamus
