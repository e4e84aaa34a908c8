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

#include "jamus/container.hpp"

#include <algorithm>
#include <utility>

#include "jamus/errors.hpp"

namespace jamus {
namespace {

std::string handle_label(HandleId handle) {
  return "h" + std::to_string(handle);
}

std::string descriptor_label(HandleId handle,
                             const ResourceDescriptor& descriptor) {
  return handle_label(handle) + ":" + to_string(descriptor);
}

// True iff consuming `amount` on top of `used` would cross `bound`.
bool exceeds(Bytes used, Bytes amount, Bytes bound) {
  return amount > bound || used > bound - amount;
}

}  // namespace

// ---------------------------------------------------------------------------
// ResourceMonitor

ResourceMonitor::ResourceMonitor(ResourceUtilisationProfile profile)
    : profile_(std::move(profile)) {}

void ResourceMonitor::set_profile(ResourceUtilisationProfile profile) {
  profile_ = std::move(profile);
}

std::optional<ViolationKind> ResourceMonitor::check(AccessKind kind,
                                                    Bytes amount) const {
  if (!permits(profile_, kind)) {
    return ViolationKind::Permission;
  }
  switch (kind) {
    case AccessKind::Read:
      if (exceeds(primary_, amount, profile_.quota.file().read_bytes))
        return ViolationKind::Quota;
      break;
    case AccessKind::Write:
      if (exceeds(secondary_, amount, profile_.quota.file().write_bytes))
        return ViolationKind::Quota;
      break;
    case AccessKind::Send:
      if (exceeds(primary_, amount, profile_.quota.socket().sent_bytes))
        return ViolationKind::Quota;
      break;
    case AccessKind::Receive:
      if (exceeds(secondary_, amount, profile_.quota.socket().received_bytes))
        return ViolationKind::Quota;
      break;
    case AccessKind::Allocate:
      // Memory is bounded instantaneously: frees below made room already.
      if (exceeds(primary_, amount, profile_.quota.memory().bytes))
        return ViolationKind::Quota;
      break;
    case AccessKind::Connect:
    case AccessKind::Accept:
    case AccessKind::Free:
      break;  // no byte dimension
  }
  return std::nullopt;
}

void ResourceMonitor::charge(AccessKind kind, Bytes amount) {
  switch (kind) {
    case AccessKind::Read: primary_ += amount; break;
    case AccessKind::Write: secondary_ += amount; break;
    case AccessKind::Send: primary_ += amount; break;
    case AccessKind::Receive: secondary_ += amount; break;
    case AccessKind::Allocate: primary_ += amount; break;
    case AccessKind::Free: primary_ -= std::min(primary_, amount); break;
    case AccessKind::Connect:
    case AccessKind::Accept:
      break;
  }
}

Quota ResourceMonitor::consumed() const {
  switch (profile_.kind()) {
    case ResourceKind::File: return file_quota(primary_, secondary_);
    case ResourceKind::Socket: return socket_quota(primary_, secondary_);
    case ResourceKind::Memory: return memory_quota(primary_);
  }
  return memory_quota(0);
}

// ---------------------------------------------------------------------------
// ApplicationMonitor

void ApplicationMonitor::configure(const Contract& contract) {
  monitors_.clear();
  routing_.clear();
  for (const ResourceUtilisationProfile& profile : contract.profiles) {
    monitors_.push_back(std::make_unique<ResourceMonitor>(profile));
  }
}

void ApplicationMonitor::reconfigure(const Contract& contract) {
  std::vector<std::unique_ptr<ResourceMonitor>> next;
  next.reserve(contract.profiles.size());
  for (const ResourceUtilisationProfile& profile : contract.profiles) {
    auto it = std::find_if(monitors_.begin(), monitors_.end(),
                           [&](const std::unique_ptr<ResourceMonitor>& m) {
                             return m && m->profile().id == profile.id;
                           });
    if (it != monitors_.end()) {
      (*it)->set_profile(profile);
      next.push_back(std::move(*it));
    } else {
      next.push_back(std::make_unique<ResourceMonitor>(profile));
    }
  }
  monitors_ = std::move(next);
  // Drop routes to retired monitors; the container re-routes live handles.
  for (auto it = routing_.begin(); it != routing_.end();) {
    bool alive = std::any_of(monitors_.begin(), monitors_.end(),
                             [&](const std::unique_ptr<ResourceMonitor>& m) {
                               return m.get() == it->second;
                             });
    it = alive ? std::next(it) : routing_.erase(it);
  }
}

std::vector<ResourceMonitor*> ApplicationMonitor::monitors() const {
  std::vector<ResourceMonitor*> out;
  out.reserve(monitors_.size());
  for (const auto& monitor : monitors_) {
    out.push_back(monitor.get());
  }
  return out;
}

ResourceMonitor* ApplicationMonitor::select(
    const ResourceDescriptor& descriptor) const {
  ResourceMonitor* best = nullptr;
  for (const auto& monitor : monitors_) {
    const ResourcePattern& pattern = monitor->profile().pattern;
    if (!matches(pattern, descriptor)) continue;
    if (!best) {
      best = monitor.get();
      continue;
    }
    const ResourcePattern& incumbent = best->profile().pattern;
    int cur = specificity(pattern);
    int inc = specificity(incumbent);
    if (cur > inc || (cur == inc && sort_key(pattern) < sort_key(incumbent))) {
      best = monitor.get();
    }
  }
  return best;
}

ResourceMonitor* ApplicationMonitor::monitor_for(HandleId handle) const {
  auto it = routing_.find(handle);
  return it == routing_.end() ? nullptr : it->second;
}

void ApplicationMonitor::assign(HandleId handle, ResourceMonitor* monitor) {
  routing_[handle] = monitor;
}

void ApplicationMonitor::unassign(HandleId handle) { routing_.erase(handle); }

std::vector<HandleId> ApplicationMonitor::routed_handles() const {
  std::vector<HandleId> out;
  out.reserve(routing_.size());
  for (const auto& [handle, monitor] : routing_) {
    out.push_back(handle);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Container

Container::Container(ComponentId id, std::vector<Sanction> sanctions,
                     StepCounter& steps)
    : id_(std::move(id)),
      steps_(steps),
      resources_(id_),
      engine_(id_, std::move(sanctions)) {
  resources_.set_announce_hook([this](const HandleRecord& rec) {
    log("resource_created\t" + descriptor_label(rec.id, rec.descriptor));
  });
  resources_.add_registry_listener(
      [this](const ResourceEvent& event) { on_event(event); });
  resources_.add_registry_listener(
      [this](const ResourceEvent& event) { on_tracker_event(event); });
  resources_.add_creation_interceptor(
      [this](const ResourceDescriptor& descriptor) {
        return on_creation(descriptor);
      });
  resources_.add_access_interceptor(
      [this](const HandleRecord& rec, AccessKind kind, Bytes amount) {
        return on_access(rec, kind, amount);
      });
}

void Container::configure(const Contract& contract) {
  if (configured_) {
    throw ProtocolError(ProtocolError::Code::AlreadyConfigured,
                        "container already configured: " + id_);
  }
  contract_ = contract;
  configured_ = true;
  log("tracker_registered\tregistry");
  app_.configure(contract);
  for (ResourceMonitor* monitor : app_.monitors()) {
    log("monitor_instantiated\t" + monitor->profile().id + "\t" +
        to_string(monitor->profile().pattern));
  }
}

void Container::reconfigure(const Contract& contract) {
  if (!configured_) {
    throw ProtocolError(ProtocolError::Code::NotConfigured,
                        "container not configured: " + id_);
  }
  std::vector<ProfileId> before;
  for (ResourceMonitor* monitor : app_.monitors()) {
    before.push_back(monitor->profile().id);
  }
  app_.reconfigure(contract);
  contract_ = contract;
  for (ResourceMonitor* monitor : app_.monitors()) {
    if (std::find(before.begin(), before.end(), monitor->profile().id) ==
        before.end()) {
      log("monitor_instantiated\t" + monitor->profile().id + "\t" +
          to_string(monitor->profile().pattern));
    }
  }
  // Live handles flow to whichever profile now covers them best; orphans
  // lose supervision and fall back to default deny on their next access.
  for (HandleId handle : resources_.live_handles()) {
    const HandleRecord& rec = resources_.record(handle);
    ResourceMonitor* monitor = app_.select(rec.descriptor);
    ResourceMonitor* current = app_.monitor_for(handle);
    if (monitor == current) continue;
    if (monitor) {
      route(handle, rec.descriptor);
    } else {
      app_.unassign(handle);
    }
  }
}

const Contract& Container::contract() const {
  if (!contract_) {
    throw ProtocolError(ProtocolError::Code::NotConfigured,
                        "container not configured: " + id_);
  }
  return *contract_;
}

void Container::on_event(const ResourceEvent& event) {
  switch (event.type) {
    case ResourceEvent::Type::Created:
      log("registry_broadcast\t" +
          descriptor_label(event.handle, event.descriptor));
      break;
    case ResourceEvent::Type::AccessRequested:
      if (logging()) {
        log("access\t" + handle_label(event.handle) + "\t" +
            to_string(*event.access) + "\t" + std::to_string(event.amount) +
            "\t" + to_string(event.verdict));
      }
      break;
    case ResourceEvent::Type::AccessCompleted:
      engine_.on_conformant_access(event.descriptor);
      break;
    case ResourceEvent::Type::Destroyed:
      break;
  }
}

void Container::on_tracker_event(const ResourceEvent& event) {
  switch (event.type) {
    case ResourceEvent::Type::Created:
      log("tracker_notified\t" +
          descriptor_label(event.handle, event.descriptor));
      if (event.verdict.allowed()) {
        route(event.handle, event.descriptor);
      }
      break;
    case ResourceEvent::Type::Destroyed:
      app_.unassign(event.handle);
      forwarders_.erase(event.handle);
      break;
    default:
      break;
  }
}

void Container::route(HandleId handle, const ResourceDescriptor& descriptor) {
  log("monitor_list_queried\t" + std::to_string(app_.monitors().size()));
  ResourceMonitor* monitor = app_.select(descriptor);
  if (!monitor) {
    return;  // admission should have denied already
  }
  log("monitor_selected\t" + monitor->profile().id);
  app_.assign(handle, monitor);
  if (forwarders_.insert(handle).second) {
    // The forwarder resolves its monitor through the routing table on every
    // event, so amendments re-route without re-registration.
    resources_.add_handle_listener(handle, [this](const ResourceEvent& event) {
      ResourceMonitor* current = app_.monitor_for(event.handle);
      if (!current) return;
      if (event.type == ResourceEvent::Type::AccessRequested) {
        if (logging()) {
          log("monitor_notified\t" + current->profile().id + "\t" +
              handle_label(event.handle) + "\t" + to_string(*event.access));
        }
      } else if (event.type == ResourceEvent::Type::AccessCompleted) {
        current->charge(*event.access, event.amount);
      }
    });
  }
  log("monitor_subscribed\t" + monitor->profile().id + "\t" +
      handle_label(handle));
}

AccessVerdict Container::on_creation(const ResourceDescriptor& descriptor) {
  if (auto standing = engine_.standing_verdict(descriptor)) {
    return *standing;
  }
  if (app_.select(descriptor) != nullptr) {
    return AccessVerdict::allow();
  }
  ViolationEvent violation{id_,          std::nullopt,
                           descriptor,   std::nullopt,
                           0,            ViolationKind::Permission,
                           steps_.current()};
  return handle_violation(std::move(violation), DenyReason::NoProfile);
}

AccessVerdict Container::on_access(const HandleRecord& rec, AccessKind kind,
                                   Bytes amount) {
  if (auto standing = engine_.standing_verdict(rec.descriptor)) {
    return *standing;
  }
  ResourceMonitor* monitor = app_.monitor_for(rec.id);
  if (!monitor) {
    ViolationEvent violation{id_,          std::nullopt,
                             rec.descriptor, kind,
                             amount,       ViolationKind::Permission,
                             steps_.current()};
    return handle_violation(std::move(violation), DenyReason::NoProfile);
  }
  if (auto kind_of_violation = monitor->check(kind, amount)) {
    monitor->note_violation();
    ViolationEvent violation{id_,          monitor->profile().id,
                             rec.descriptor, kind,
                             amount,       *kind_of_violation,
                             steps_.current()};
    DenyReason base = *kind_of_violation == ViolationKind::Quota
                          ? DenyReason::Quota
                          : DenyReason::Permission;
    return handle_violation(std::move(violation), base);
  }
  if (monitor->profile().policy == AvailabilityPolicy::BestEffort) {
    if (auto denial = probe_best_effort(*monitor, kind, amount)) {
      return *denial;
    }
  }
  return AccessVerdict::allow();
}

AccessVerdict Container::handle_violation(ViolationEvent violation,
                                          DenyReason base_reason) {
  violations_.push_back(violation);
  SanctionEngine::Outcome outcome = engine_.on_violation(violation, base_reason);
  if (outcome.warning) {
    warnings_.push_back(*outcome.warning);
    if (sink_) sink_(*outcome.warning);
  }
  if (outcome.lock_pattern) {
    resources_.lock_matching(*outcome.lock_pattern);
  }
  return outcome.verdict;
}

std::optional<AccessVerdict> Container::probe_best_effort(
    const ResourceMonitor& monitor, AccessKind kind, Bytes amount) {
  if (!probe_) return std::nullopt;
  Bytes available = 0;
  bool needs_bytes = true;
  std::optional<Quota> remaining = probe_(monitor.profile().pattern);
  switch (kind) {
    case AccessKind::Read:
      available = remaining ? remaining->file().read_bytes : 0;
      break;
    case AccessKind::Write:
      available = remaining ? remaining->file().write_bytes : 0;
      break;
    case AccessKind::Send:
      available = remaining ? remaining->socket().sent_bytes : 0;
      break;
    case AccessKind::Receive:
      available = remaining ? remaining->socket().received_bytes : 0;
      break;
    case AccessKind::Allocate:
      available = remaining ? remaining->memory().bytes : 0;
      break;
    case AccessKind::Connect:
    case AccessKind::Accept:
    case AccessKind::Free:
      needs_bytes = false;
      break;
  }
  if (!needs_bytes || available >= amount) {
    return std::nullopt;
  }
  // Not the component's fault: no violation is recorded, only a notice.
  Warning warning;
  warning.kind = Warning::Kind::BestEffortDenial;
  warning.component = id_;
  warning.pattern = to_string(monitor.profile().pattern);
  warning.step = steps_.current();
  warning.message = "platform capacity exhausted for " + warning.pattern +
                    "; best-effort access denied";
  warnings_.push_back(warning);
  if (sink_) sink_(warning);
  return AccessVerdict::reject(DenyReason::BestEffort);
}

std::vector<UsageEntry> Container::usage_report() const {
  std::vector<UsageEntry> out;
  for (ResourceMonitor* monitor : app_.monitors()) {
    const ResourceUtilisationProfile& profile = monitor->profile();
    out.push_back(UsageEntry{profile.id, to_string(profile.pattern),
                             profile.policy, monitor->consumed(), profile.quota,
                             monitor->violations()});
  }
  return out;
}

void Container::stop() { resources_.close_all(); }

}  // namespace jamus
