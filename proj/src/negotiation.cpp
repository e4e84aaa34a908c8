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

#include "jamus/negotiation.hpp"

#include <stdexcept>
#include <utility>

#include "jamus/errors.hpp"

namespace jamus {

std::string to_string(ContractState state) {
  switch (state) {
    case ContractState::Submitted: return "submitted";
    case ContractState::RejectedAtSubmission: return "rejected_at_submission";
    case ContractState::Accepted: return "accepted";
    case ContractState::Subscribed: return "subscribed";
    case ContractState::RejectedAtSubscription:
      return "rejected_at_subscription";
    case ContractState::Terminated: return "terminated";
  }
  return "?";
}

bool valid_transition(ContractState from, ContractState to) {
  switch (from) {
    case ContractState::Submitted:
      return to == ContractState::RejectedAtSubmission ||
             to == ContractState::Accepted;
    case ContractState::Accepted:
      return to == ContractState::Subscribed ||
             to == ContractState::RejectedAtSubscription;
    case ContractState::Subscribed:
      return to == ContractState::Subscribed ||
             to == ContractState::Terminated;
    case ContractState::RejectedAtSubmission:
    case ContractState::RejectedAtSubscription:
    case ContractState::Terminated:
      return false;
  }
  return false;
}

ContractManager::ContractManager(Broker& broker, StepCounter& steps,
                                 Hooks* hooks)
    : broker_(broker), steps_(steps), hooks_(hooks) {}

void ContractManager::record(ComponentLedger& ledger, std::string operation,
                             const ContractId& contract_id,
                             std::optional<SubmissionReport> report,
                             ContractState after) {
  // Every negotiation operation is its own logical step so the history is
  // strictly ordered even when no component script is running.
  ledger.history.push_back(NegotiationRecord{steps_.next(),
                                             std::move(operation), contract_id,
                                             std::move(report), after});
}

void ContractManager::transition(ComponentLedger& ledger,
                                 const ContractId& contract_id,
                                 ContractState to) {
  ContractState from = ledger.states.at(contract_id);
  if (!valid_transition(from, to)) {
    throw std::logic_error("illegal contract state transition: " +
                           to_string(from) + " -> " + to_string(to));
  }
  ledger.states[contract_id] = to;
}

SubmissionReport ContractManager::submit(const ComponentId& component,
                                         Contract contract) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto errors = validate_contract(contract);
  if (!errors.empty()) {
    throw std::invalid_argument("invalid contract " + contract.id + ": " +
                                to_string(errors.front().code) +
                                (errors.front().detail.empty()
                                     ? ""
                                     : " (" + errors.front().detail + ")"));
  }
  if (owners_.count(contract.id) > 0) {
    throw ProtocolError(ProtocolError::Code::DuplicateContractId,
                        "contract id already used: " + contract.id);
  }
  ComponentLedger& ledger = ledgers_[component];
  owners_[contract.id] = component;
  ContractId id = contract.id;
  ledger.states[id] = ContractState::Submitted;
  ledger.contracts.emplace(id, std::move(contract));

  SubmissionReport report = broker_.evaluate(ledger.contracts.at(id));
  transition(ledger, id,
             report.accepted ? ContractState::Accepted
                             : ContractState::RejectedAtSubmission);
  record(ledger, "submit", id, report, ledger.states.at(id));
  return report;
}

SubmissionReport ContractManager::subscribe(const ComponentId& component,
                                            const ContractId& contract_id) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto lit = ledgers_.find(component);
  if (lit == ledgers_.end() || lit->second.contracts.count(contract_id) == 0) {
    throw ProtocolError(ProtocolError::Code::UnknownContract,
                        "unknown contract: " + contract_id);
  }
  ComponentLedger& ledger = lit->second;
  if (ledger.states.at(contract_id) != ContractState::Accepted) {
    throw ProtocolError(
        ProtocolError::Code::NotAccepted,
        "contract not in accepted state: " + contract_id + " (" +
            to_string(ledger.states.at(contract_id)) + ")");
  }
  if (ledger.subscribed) {
    throw ProtocolError(ProtocolError::Code::AlreadySubscribedComponent,
                        "component already holds a subscription: " + component);
  }
  // Capacity may have been promised elsewhere since submission, hence the
  // fresh evaluation bundled with the reservation.
  SubmissionReport report = broker_.subscribe(ledger.contracts.at(contract_id));
  if (report.accepted) {
    transition(ledger, contract_id, ContractState::Subscribed);
    ledger.subscribed = contract_id;
  } else {
    transition(ledger, contract_id, ContractState::RejectedAtSubscription);
  }
  record(ledger, "subscribe", contract_id, report,
         ledger.states.at(contract_id));
  if (report.accepted && hooks_ != nullptr) {
    hooks_->on_subscribed(component, ledger.contracts.at(contract_id));
  }
  return report;
}

SubmissionReport ContractManager::amend(const ComponentId& component,
                                        const Amendment& amendment) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto lit = ledgers_.find(component);
  if (lit == ledgers_.end() || !lit->second.subscribed) {
    throw ProtocolError(ProtocolError::Code::NoSubscribedContract,
                        "component has no subscribed contract: " + component);
  }
  ComponentLedger& ledger = lit->second;
  const Contract& current = ledger.contracts.at(*ledger.subscribed);
  Contract amended = apply_amendment(current, amendment);
  auto errors = validate_contract(amended);
  if (!errors.empty()) {
    throw AmendmentError(AmendmentError::Code::MalformedClause,
                         "amended contract would be invalid: " +
                             to_string(errors.front().code));
  }
  SubmissionReport report = broker_.amend_subscription(current, amended);
  if (report.accepted) {
    ledger.contracts.at(*ledger.subscribed) = amended;
    transition(ledger, *ledger.subscribed, ContractState::Subscribed);
  }
  record(ledger, "amend", *ledger.subscribed, report,
         ledger.states.at(*ledger.subscribed));
  if (report.accepted && hooks_ != nullptr) {
    hooks_->on_amended(component, ledger.contracts.at(*ledger.subscribed));
  }
  return report;
}

void ContractManager::terminate(const ComponentId& component) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto lit = ledgers_.find(component);
  if (lit == ledgers_.end() || !lit->second.subscribed) {
    throw ProtocolError(ProtocolError::Code::NoSubscribedContract,
                        "component has no subscribed contract: " + component);
  }
  ComponentLedger& ledger = lit->second;
  ContractId id = *ledger.subscribed;
  broker_.release(id);
  transition(ledger, id, ContractState::Terminated);
  ledger.subscribed.reset();
  record(ledger, "terminate", id, std::nullopt, ContractState::Terminated);
  if (hooks_ != nullptr) {
    hooks_->on_terminated(component);
  }
}

bool ContractManager::has_subscription(const ComponentId& component) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = ledgers_.find(component);
  return it != ledgers_.end() && it->second.subscribed.has_value();
}

const Contract& ContractManager::subscribed_contract(
    const ComponentId& component) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = ledgers_.find(component);
  if (it == ledgers_.end() || !it->second.subscribed) {
    throw ProtocolError(ProtocolError::Code::NoSubscribedContract,
                        "component has no subscribed contract: " + component);
  }
  return it->second.contracts.at(*it->second.subscribed);
}

ContractState ContractManager::state(const ComponentId& component,
                                     const ContractId& contract_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = ledgers_.find(component);
  if (it == ledgers_.end() || it->second.states.count(contract_id) == 0) {
    throw ProtocolError(ProtocolError::Code::UnknownContract,
                        "unknown contract: " + contract_id);
  }
  return it->second.states.at(contract_id);
}

std::vector<ComponentId> ContractManager::components() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<ComponentId> out;
  out.reserve(ledgers_.size());
  for (const auto& [component, ledger] : ledgers_) {
    out.push_back(component);
  }
  return out;
}

const ComponentLedger& ContractManager::ledger(
    const ComponentId& component) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = ledgers_.find(component);
  if (it == ledgers_.end()) {
    throw ProtocolError(ProtocolError::Code::UnknownContract,
                        "unknown component: " + component);
  }
  return it->second;
}

}  // namespace jamus
