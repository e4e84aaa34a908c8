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

#include "jamus/host.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "jamus/container.hpp"
#include "jamus/json_io.hpp"
#include "jamus/negotiation.hpp"
#include "jamus/trace.hpp"

namespace jamus {

namespace {

/// Live state of one hosted component during a run.
struct Runner {
  const ComponentSpec* spec = nullptr;
  std::unique_ptr<Container> container;
  bool started = false;
  bool terminated = false;
  std::size_t next_step = 0;                    // script cursor
  std::deque<ScriptStep> queued;                // inserted warning reactions
  std::vector<std::optional<HandleId>> slots;   // one per creation step
  std::vector<Warning> inbox;                   // warnings, delivery order
  std::size_t warnings_handled = 0;
  std::size_t handlers_used = 0;

  bool runnable() const {
    return started && !terminated &&
           (next_step < spec->script.size() || !queued.empty());
  }
};

class HostHooks : public ContractManager::Hooks {
 public:
  explicit HostHooks(std::map<ComponentId, Runner*>& runners)
      : runners_(runners) {}

  void on_subscribed(const ComponentId& component,
                     const Contract& contract) override {
    runners_.at(component)->container->configure(contract);
  }
  void on_amended(const ComponentId& component,
                  const Contract& contract) override {
    runners_.at(component)->container->reconfigure(contract);
  }
  void on_terminated(const ComponentId& component) override {
    runners_.at(component)->container->stop();
  }

 private:
  std::map<ComponentId, Runner*>& runners_;
};

AccessKind op_access_kind(ScriptStep::Op op) {
  switch (op) {
    case ScriptStep::Op::Read:
      return AccessKind::Read;
    case ScriptStep::Op::Write:
      return AccessKind::Write;
    case ScriptStep::Op::Send:
      return AccessKind::Send;
    case ScriptStep::Op::Receive:
      return AccessKind::Receive;
    default:
      throw std::logic_error("not a byte-moving op");
  }
}

json sanction_status_json(const SanctionEngine::Status& status) {
  json j{{"pattern", to_string(status.sanction.pattern)},
         {"kind", to_string(status.sanction.kind)},
         {"action", to_string(status.sanction.action)},
         {"threshold", status.sanction.threshold},
         {"consecutive", status.consecutive},
         {"warnings_issued", status.warnings_issued},
         {"fired", status.fired},
         {"applied", status.applied}};
  if (status.applied_step) j["applied_step"] = *status.applied_step;
  return j;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  StepCounter steps;
  Broker broker{scenario.capacity};
  std::vector<std::unique_ptr<Runner>> runners;
  std::map<ComponentId, Runner*> by_id;
  HostHooks hooks(by_id);
  ContractManager manager(broker, steps, &hooks);

  std::string trace = std::string(kTraceHeader) + "\n";
  std::uint64_t trace_events = 0;

  for (const ComponentSpec& spec : scenario.components) {
    auto runner = std::make_unique<Runner>();
    runner->spec = &spec;
    runner->container =
        std::make_unique<Container>(spec.id, scenario.sanctions, steps);
    runner->container->set_capacity_probe(
        [&broker](const ResourcePattern& pattern) {
          return broker.remaining_for(pattern);
        });
    Runner* raw = runner.get();
    runner->container->set_warning_sink(
        [raw](const Warning& warning) { raw->inbox.push_back(warning); });
    const ComponentId id = spec.id;
    runner->container->resources().add_registry_listener(
        [&trace, &trace_events, id](const ResourceEvent& event) {
          trace += format_trace_line(id, event);
          trace += '\n';
          ++trace_events;
        });
    by_id.emplace(spec.id, raw);
    runners.push_back(std::move(runner));
  }

  // Negotiation phase, in declaration order: submit every proposal, then
  // subscribe the designated one. A proposal rejected at submission is left
  // alone; a subscription can still be turned down if earlier components
  // took the capacity first.
  for (auto& runner : runners) {
    const ComponentSpec& spec = *runner->spec;
    for (const Contract& contract : spec.contracts) {
      manager.submit(spec.id, contract);
    }
    if (spec.subscribe &&
        manager.state(spec.id, *spec.subscribe) == ContractState::Accepted) {
      SubmissionReport report = manager.subscribe(spec.id, *spec.subscribe);
      runner->started = report.accepted;
    }
  }

  auto execute_turn = [&](Runner& runner) {
    ScriptStep step;
    if (!runner.queued.empty()) {
      step = runner.queued.front();
      runner.queued.pop_front();
    } else {
      step = runner.spec->script[runner.next_step++];
    }
    steps.next();
    VirtualResources& resources = runner.container->resources();
    switch (step.op) {
      case ScriptStep::Op::OpenFile:
        runner.slots.push_back(resources.open_file(step.path, step.mode).handle);
        break;
      case ScriptStep::Op::OpenSocket:
        runner.slots.push_back(resources.open_socket(step.host, step.port).handle);
        break;
      case ScriptStep::Op::Read:
      case ScriptStep::Op::Write:
      case ScriptStep::Op::Send:
      case ScriptStep::Op::Receive: {
        // A vetoed creation leaves an empty slot; actions on it are skipped.
        const auto& slot = runner.slots.at(static_cast<std::size_t>(step.handle));
        if (slot) resources.access(*slot, op_access_kind(step.op), step.bytes);
        break;
      }
      case ScriptStep::Op::Close: {
        const auto& slot = runner.slots.at(static_cast<std::size_t>(step.handle));
        if (slot) resources.close(*slot);
        break;
      }
      case ScriptStep::Op::Allocate:
        resources.allocate(step.bytes);
        break;
      case ScriptStep::Op::Free:
        resources.free_memory(step.bytes);
        break;
      case ScriptStep::Op::Amend:
        manager.amend(runner.spec->id, *step.amendment);
        break;
      case ScriptStep::Op::Terminate:
        manager.terminate(runner.spec->id);
        runner.terminated = true;
        break;
    }
    // Each warning delivered so far is answered by the next unused handler,
    // queued as the component's next action; surplus warnings go unanswered.
    while (runner.warnings_handled < runner.inbox.size()) {
      ++runner.warnings_handled;
      if (runner.handlers_used >= runner.spec->on_warning.size()) continue;
      const WarningHandler& handler =
          runner.spec->on_warning[runner.handlers_used++];
      ScriptStep inserted;
      if (handler.action == WarningHandler::Action::Amend) {
        inserted.op = ScriptStep::Op::Amend;
        inserted.amendment = handler.amendment;
      } else {
        inserted.op = ScriptStep::Op::Terminate;
      }
      runner.queued.push_back(std::move(inserted));
    }
  };

  if (options.seed) {
    ScheduleRng rng(*options.seed);
    for (;;) {
      std::vector<Runner*> alive;
      for (auto& runner : runners)
        if (runner->runnable()) alive.push_back(runner.get());
      if (alive.empty()) break;
      execute_turn(*alive[rng.pick(alive.size())]);
    }
  } else {
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (auto& runner : runners) {
        if (runner->runnable()) {
          execute_turn(*runner);
          progressed = true;
        }
      }
    }
  }

  // Wind-down: close what is still open, in declaration order. Reservations
  // of non-terminated components stay in force and show up in the report.
  for (auto& runner : runners) {
    if (runner->started && !runner->terminated) runner->container->stop();
  }

  int exit_code = 0;
  for (auto& runner : runners)
    if (runner->container->sanction_applied()) exit_code = 3;

  json report;
  report["schema_version"] = 1;
  report["exit_code"] = exit_code;
  report["clean"] = exit_code == 0;
  report["steps"] = steps.current();
  report["trace_events"] = trace_events;

  const std::vector<ComponentId> known = manager.components();
  json negotiation = json::array();
  for (const auto& runner : runners) {
    const ComponentSpec& spec = *runner->spec;
    json entry;
    entry["component"] = spec.id;
    json contracts = json::array();
    json history = json::array();
    entry["subscribed"] = nullptr;
    if (std::find(known.begin(), known.end(), spec.id) != known.end()) {
      const ComponentLedger& ledger = manager.ledger(spec.id);
      for (const auto& [contract_id, state] : ledger.states)
        contracts.push_back({{"id", contract_id}, {"state", to_string(state)}});
      for (const NegotiationRecord& record : ledger.history)
        history.push_back(json_of(record));
      if (ledger.subscribed) {
        entry["subscribed"] = *ledger.subscribed;
        entry["subscribed_contract"] =
            json_of(ledger.contracts.at(*ledger.subscribed));
      }
    }
    entry["contracts"] = std::move(contracts);
    entry["history"] = std::move(history);
    negotiation.push_back(std::move(entry));
  }
  report["negotiation"] = std::move(negotiation);

  json containers = json::array();
  for (const auto& runner : runners) {
    const Container& container = *runner->container;
    json entry;
    entry["component"] = runner->spec->id;
    entry["configured"] = container.configured();
    entry["started"] = runner->started;
    entry["terminated"] = runner->terminated;
    json usage = json::array();
    for (const UsageEntry& u : container.usage_report()) {
      usage.push_back(
          {{"profile", u.profile_id},
           {"pattern", u.pattern},
           {"policy", u.policy == AvailabilityPolicy::Reservation
                          ? "reservation"
                          : "best_effort"},
           {"consumed", json_of(u.consumed)},
           {"quota", json_of(u.quota)},
           {"violations", u.violations}});
    }
    entry["usage"] = std::move(usage);
    json violations = json::array();
    for (const ViolationEvent& v : container.violations())
      violations.push_back(json_of(v));
    entry["violations"] = std::move(violations);
    json warnings = json::array();
    for (const Warning& w : container.warnings()) warnings.push_back(json_of(w));
    entry["warnings"] = std::move(warnings);
    json sanctions = json::array();
    for (const SanctionEngine::Status& status : container.sanctions().status())
      sanctions.push_back(sanction_status_json(status));
    entry["sanctions"] = std::move(sanctions);
    entry["sanction_applied"] = container.sanction_applied();
    entry["allocated_bytes"] = container.resources().allocated_bytes();
    entry["action_log"] = container.action_log();
    containers.push_back(std::move(entry));
  }
  report["containers"] = std::move(containers);

  report["final_capacity"] = json_of(broker.capacity_snapshot());
  json reservations = json::array();
  for (const auto& runner : runners) {
    if (!manager.has_subscription(runner->spec->id)) continue;
    const ComponentLedger& ledger = manager.ledger(runner->spec->id);
    auto reservation = broker.reservation(*ledger.subscribed);
    if (!reservation) continue;
    json deductions = json::array();
    for (const Deduction& d : reservation->deductions)
      deductions.push_back(
          {{"entry", d.entry_index}, {"amount", json_of(d.amount)}});
    reservations.push_back({{"component", runner->spec->id},
                            {"contract", reservation->contract_id},
                            {"deductions", std::move(deductions)}});
  }
  report["reservations"] = std::move(reservations);

  return RunResult{std::move(report), std::move(trace), exit_code};
}

}  // namespace jamus
