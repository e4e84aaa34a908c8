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
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jamus/contract.hpp"
#include "jamus/resources.hpp"
#include "jamus/sanctions.hpp"
#include "jamus/step.hpp"
#include "jamus/violation.hpp"

namespace jamus {

/// Watches the resources covered by one utilisation profile: keeps their
/// cumulative (or, for memory, instantaneous) usage ledger and judges each
/// access attempt against the profile's permission and quota.
class ResourceMonitor {
 public:
  explicit ResourceMonitor(ResourceUtilisationProfile profile);

  const ResourceUtilisationProfile& profile() const { return profile_; }
  /// Swaps the clauses while keeping the ledger (amendment continuity).
  void set_profile(ResourceUtilisationProfile profile);

  /// Judges an access without recording anything. Empty means conformant.
  std::optional<ViolationKind> check(AccessKind kind, Bytes amount) const;
  /// Records a completed access in the ledger.
  void charge(AccessKind kind, Bytes amount);

  Quota consumed() const;
  int violations() const { return violations_; }
  void note_violation() { ++violations_; }

 private:
  ResourceUtilisationProfile profile_;
  // Ledger dimensions by kind: file read/written, socket sent/received,
  // memory currently allocated (primary only).
  Bytes primary_ = 0;
  Bytes secondary_ = 0;
  int violations_ = 0;
};

/// The per-component application monitor: one ResourceMonitor per profile,
/// plus the routing table from live handles to their supervising monitor.
class ApplicationMonitor {
 public:
  void configure(const Contract& contract);
  /// Rebuilds the monitor set for an amended contract. Monitors of retained
  /// profile ids survive with their ledgers; new profiles get fresh ones.
  void reconfigure(const Contract& contract);

  std::vector<ResourceMonitor*> monitors() const;
  /// Most specific profile matching the descriptor (ties: smallest rendered
  /// pattern), mirroring the broker's capacity matching rule.
  ResourceMonitor* select(const ResourceDescriptor& descriptor) const;

  ResourceMonitor* monitor_for(HandleId handle) const;
  void assign(HandleId handle, ResourceMonitor* monitor);
  void unassign(HandleId handle);
  std::vector<HandleId> routed_handles() const;

 private:
  std::vector<std::unique_ptr<ResourceMonitor>> monitors_;
  std::map<HandleId, ResourceMonitor*> routing_;
};

/// Usage snapshot for one profile, as reported by the container.
struct UsageEntry {
  ProfileId profile_id;
  std::string pattern;
  AvailabilityPolicy policy = AvailabilityPolicy::BestEffort;
  Quota consumed;
  Quota quota;
  int violations = 0;
};

/// Execution environment of one hosted component. Bridges the reified
/// resources to the supervision side: a resource tracker routes every new
/// resource to the most specific profile monitor, interceptors veto
/// non-conformant creations and accesses, violations feed the sanction
/// engine, and warnings are forwarded to the component's inbox.
class Container {
 public:
  using WarningSink = std::function<void(const Warning&)>;
  /// Remaining platform quota for a pattern, for best-effort probing.
  using CapacityProbe =
      std::function<std::optional<Quota>(const ResourcePattern&)>;

  Container(ComponentId id, std::vector<Sanction> sanctions,
            StepCounter& steps);

  void set_warning_sink(WarningSink sink) { sink_ = std::move(sink); }
  void set_capacity_probe(CapacityProbe probe) { probe_ = std::move(probe); }

  /// Installs the first subscribed contract and instantiates its monitors.
  void configure(const Contract& contract);
  /// Swaps in an amended contract: monitors of kept profiles keep their
  /// ledgers, and live handles are re-routed under the new profile set.
  void reconfigure(const Contract& contract);
  bool configured() const { return configured_; }
  const Contract& contract() const;

  const ComponentId& id() const { return id_; }
  VirtualResources& resources() { return resources_; }
  const VirtualResources& resources() const { return resources_; }

  std::vector<UsageEntry> usage_report() const;
  const std::vector<ViolationEvent>& violations() const { return violations_; }
  const std::vector<Warning>& warnings() const { return warnings_; }
  const SanctionEngine& sanctions() const { return engine_; }
  bool sanction_applied() const { return engine_.any_applied(); }

  /// Ordered record of supervision actions, for auditing the control flow.
  const std::vector<std::string>& action_log() const { return action_log_; }
  /// Caps the audit log: once `limit` entries were recorded, further actions
  /// run unlogged. Defaults to unbounded; long-running components can bound
  /// their audit memory without touching enforcement.
  void set_action_log_limit(std::size_t limit) { action_log_limit_ = limit; }

  /// Closes every live handle.
  void stop();

 private:
  AccessVerdict on_creation(const ResourceDescriptor& descriptor);
  AccessVerdict on_access(const HandleRecord& rec, AccessKind kind,
                          Bytes amount);
  void on_event(const ResourceEvent& event);         // action logger
  void on_tracker_event(const ResourceEvent& event);  // routing
  void route(HandleId handle, const ResourceDescriptor& descriptor);
  AccessVerdict handle_violation(ViolationEvent violation,
                                 DenyReason base_reason);
  std::optional<AccessVerdict> probe_best_effort(const ResourceMonitor& monitor,
                                                 AccessKind kind, Bytes amount);
  /// Cheap pre-check so hot paths can skip building the log line entirely.
  bool logging() const { return action_log_.size() < action_log_limit_; }
  void log(std::string line) {
    if (logging()) action_log_.push_back(std::move(line));
  }

  ComponentId id_;
  StepCounter& steps_;
  VirtualResources resources_;
  SanctionEngine engine_;
  ApplicationMonitor app_;
  std::optional<Contract> contract_;
  bool configured_ = false;
  WarningSink sink_;
  CapacityProbe probe_;
  std::vector<ViolationEvent> violations_;
  std::vector<Warning> warnings_;
  std::set<HandleId> forwarders_;  // handles with a monitor-forwarding listener
  std::vector<std::string> action_log_;
  std::size_t action_log_limit_ = std::numeric_limits<std::size_t>::max();
};

}  // namespace jamus
