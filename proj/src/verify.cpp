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

#include "jamus/verify.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <utility>

#include "jamus/amendment.hpp"
#include "jamus/errors.hpp"
#include "jamus/host.hpp"
#include "jamus/trace.hpp"

// The checker below re-derives matching, admission, supervision and sanction
// decisions from their documented rules instead of calling the runtime, on
// purpose: duplicated logic is the price of an oracle that cannot inherit
// the runtime's bugs. Only value types, parsers and the schedule source are
// shared, since those define the formats being checked.

namespace jamus {
namespace {

constexpr std::size_t kMaxDiscrepancies = 50;

struct Abort {};

struct Ctx {
  std::vector<Discrepancy> out;
  std::size_t last_consumed = 0;  // file line of the last consumed event

  void flag(std::size_t line, std::string message) {
    out.push_back(Discrepancy{line, std::move(message)});
    if (out.size() >= kMaxDiscrepancies) throw Abort{};
  }
};

// ----------------------------------------------------------------- patterns

bool seg_prefix(const std::string& path, const std::string& prefix) {
  if (path == prefix) return true;
  if (prefix == "/") return !path.empty() && path[0] == '/';
  if (prefix == "~")
    return path.size() >= 2 && path[0] == '~' && path[1] == '/';
  if (path.size() <= prefix.size()) return false;
  if (path.compare(0, prefix.size(), prefix) != 0) return false;
  return path[prefix.size()] == '/';
}

std::optional<std::string> normalize(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::string root;
  std::size_t at = 0;
  if (path[0] == '/') {
    root = "/";
    at = 1;
  } else if (path[0] == '~') {
    if (path.size() > 1 && path[1] != '/') return std::nullopt;
    root = "~";
    at = path.size() > 1 ? 2 : 1;
  } else {
    return std::nullopt;
  }
  std::vector<std::string> segments;
  while (at <= path.size()) {
    auto slash = path.find('/', at);
    std::string seg = path.substr(at, slash == std::string::npos
                                          ? std::string::npos
                                          : slash - at);
    at = slash == std::string::npos ? path.size() + 1 : slash + 1;
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") return std::nullopt;
    segments.push_back(std::move(seg));
  }
  std::string out = root;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i > 0 || root != "/") out += '/';
    out += segments[i];
  }
  return out;
}

std::string pattern_text(const ResourcePattern& pattern) {
  switch (pattern.kind()) {
    case ResourceKind::File:
      return "file:" + pattern.file().path_prefix;
    case ResourceKind::Socket:
      return "socket:" + pattern.socket().host_glob + ":" +
             (pattern.socket().port ? std::to_string(*pattern.socket().port)
                                    : "any");
    case ResourceKind::Memory:
      return "memory";
  }
  return "?";
}

bool pattern_matches(const ResourcePattern& pattern,
                     const ResourceDescriptor& descriptor) {
  if (pattern.kind() != descriptor.kind()) return false;
  switch (pattern.kind()) {
    case ResourceKind::File:
      return seg_prefix(descriptor.file().path, pattern.file().path_prefix);
    case ResourceKind::Socket: {
      if (pattern.socket().host_glob != "*" &&
          pattern.socket().host_glob != descriptor.socket().host)
        return false;
      return !pattern.socket().port ||
             *pattern.socket().port == descriptor.socket().port;
    }
    case ResourceKind::Memory:
      return true;
  }
  return false;
}

bool pattern_subsumes(const ResourcePattern& outer,
                      const ResourcePattern& inner) {
  if (outer.kind() != inner.kind()) return false;
  switch (outer.kind()) {
    case ResourceKind::File:
      return seg_prefix(inner.file().path_prefix, outer.file().path_prefix);
    case ResourceKind::Socket: {
      if (outer.socket().host_glob != "*" &&
          outer.socket().host_glob != inner.socket().host_glob)
        return false;
      return !outer.socket().port ||
             (inner.socket().port &&
              *outer.socket().port == *inner.socket().port);
    }
    case ResourceKind::Memory:
      return true;
  }
  return false;
}

int pattern_rank(const ResourcePattern& pattern) {
  switch (pattern.kind()) {
    case ResourceKind::File:
      return static_cast<int>(pattern.file().path_prefix.size());
    case ResourceKind::Socket:
      return (pattern.socket().host_glob != "*" ? 1 : 0) +
             (pattern.socket().port ? 1 : 0);
    case ResourceKind::Memory:
      return 0;
  }
  return 0;
}

// ------------------------------------------------------- quotas/permissions

struct Pair {
  Bytes a = 0;
  Bytes b = 0;
};

Pair quota_pair(const Quota& quota) {
  switch (quota.kind()) {
    case ResourceKind::File:
      return {quota.file().read_bytes, quota.file().write_bytes};
    case ResourceKind::Socket:
      return {quota.socket().sent_bytes, quota.socket().received_bytes};
    case ResourceKind::Memory:
      return {quota.memory().bytes, 0};
  }
  return {};
}

struct Flags {
  bool x = false;
  bool y = false;
};

Flags perm_flags(const AccessPermission& permission) {
  switch (permission.kind()) {
    case ResourceKind::File:
      return {permission.file().read, permission.file().write};
    case ResourceKind::Socket:
      return {permission.socket().connect, permission.socket().accept};
    case ResourceKind::Memory:
      return {permission.memory().allocate, false};
  }
  return {};
}

bool profile_permits(const ResourceUtilisationProfile& profile,
                     AccessKind kind) {
  Flags flags = perm_flags(profile.permission);
  switch (kind) {
    case AccessKind::Read:
    case AccessKind::Connect:
    case AccessKind::Allocate:
      return flags.x;
    case AccessKind::Write:
    case AccessKind::Accept:
      return flags.y;
    case AccessKind::Send:
    case AccessKind::Receive:
      return flags.x || flags.y;  // either way of holding a socket
    case AccessKind::Free:
      return true;
  }
  return false;
}

// True iff consuming `amount` on top of `used` would cross `bound`.
bool would_exceed(Bytes used, Bytes amount, Bytes bound) {
  return amount > bound || used > bound - amount;
}

// ---------------------------------------------------------------- admission

struct CapSlot {
  const CapacityEntry* entry = nullptr;
  Pair remaining;
};

std::optional<std::size_t> pick_entry(const std::vector<CapSlot>& caps,
                                      const ResourcePattern& pattern) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const ResourcePattern& candidate = caps[i].entry->pattern;
    if (!pattern_subsumes(candidate, pattern)) continue;
    if (!best) {
      best = i;
      continue;
    }
    const ResourcePattern& incumbent = caps[*best].entry->pattern;
    int cur = pattern_rank(candidate);
    int inc = pattern_rank(incumbent);
    if (cur > inc ||
        (cur == inc && pattern_text(candidate) < pattern_text(incumbent))) {
      best = i;
    }
  }
  return best;
}

struct AdmitResult {
  bool accepted = false;
  std::vector<std::pair<std::size_t, Pair>> deductions;
};

AdmitResult admit(const std::vector<CapSlot>& caps, const Contract& contract) {
  std::vector<Pair> scratch;
  scratch.reserve(caps.size());
  for (const CapSlot& slot : caps) scratch.push_back(slot.remaining);

  AdmitResult result;
  bool ok = true;
  for (const ResourceUtilisationProfile& profile : contract.profiles) {
    auto idx = pick_entry(caps, profile.pattern);
    if (!idx) {
      ok = false;
      continue;
    }
    Flags offered = perm_flags(caps[*idx].entry->permission);
    Flags needed = perm_flags(profile.permission);
    if ((needed.x && !offered.x) || (needed.y && !offered.y)) {
      ok = false;
      continue;
    }
    Pair want = quota_pair(profile.quota);
    if (want.a > scratch[*idx].a || want.b > scratch[*idx].b) {
      ok = false;
      continue;
    }
    if (profile.policy == AvailabilityPolicy::Reservation) {
      scratch[*idx].a -= want.a;
      scratch[*idx].b -= want.b;
      result.deductions.emplace_back(*idx, want);
    }
  }
  result.accepted = ok;
  if (!ok) result.deductions.clear();
  return result;
}

void apply_deductions(std::vector<CapSlot>& caps,
                      const std::vector<std::pair<std::size_t, Pair>>& ds) {
  for (const auto& [idx, amount] : ds) {
    caps[idx].remaining.a -= amount.a;
    caps[idx].remaining.b -= amount.b;
  }
}

void return_deductions(std::vector<CapSlot>& caps,
                       const std::vector<std::pair<std::size_t, Pair>>& ds) {
  for (const auto& [idx, amount] : ds) {
    caps[idx].remaining.a += amount.a;
    caps[idx].remaining.b += amount.b;
  }
}

// ----------------------------------------------------------- component sim

struct ProfileSim {
  ResourceUtilisationProfile profile;
  Pair used;
};

struct SanctionSim {
  Sanction rule;
  int consecutive = 0;
  bool applied = false;
};

struct HandleSim {
  HandleId id = 0;
  ResourceDescriptor descriptor;
  HandleState state = HandleState::Open;
};

struct Sim {
  const ComponentSpec* spec = nullptr;
  bool started = false;
  bool terminated = false;
  std::size_t next_step = 0;
  std::deque<ScriptStep> queued;
  std::vector<std::optional<HandleId>> slots;
  std::size_t handlers_used = 0;

  Contract contract;  // the one in force, evolving under amendments
  std::vector<std::pair<std::size_t, Pair>> held;  // live deductions
  std::vector<ProfileSim> profiles;
  std::vector<SanctionSim> sanctions;
  std::map<HandleId, HandleSim> handles;
  std::vector<HandleId> live;  // creation order
  std::map<HandleId, std::string> routing;  // handle -> profile id
  std::optional<HandleId> pool;
  Bytes allocated = 0;
  HandleId last_handle = 0;
  std::uint64_t last_seq = 0;

  std::deque<std::pair<std::size_t, TraceLine>> pending;  // (file line, event)

  bool runnable() const {
    return started && !terminated &&
           (next_step < spec->script.size() || !queued.empty());
  }
};

ProfileSim* find_profile(Sim& sim, const std::string& id) {
  for (ProfileSim& p : sim.profiles)
    if (p.profile.id == id) return &p;
  return nullptr;
}

/// Most specific profile matching the descriptor; ties by rendered pattern.
ProfileSim* select_profile(Sim& sim, const ResourceDescriptor& descriptor) {
  ProfileSim* best = nullptr;
  for (ProfileSim& p : sim.profiles) {
    if (!pattern_matches(p.profile.pattern, descriptor)) continue;
    if (!best) {
      best = &p;
      continue;
    }
    int cur = pattern_rank(p.profile.pattern);
    int inc = pattern_rank(best->profile.pattern);
    if (cur > inc || (cur == inc && pattern_text(p.profile.pattern) <
                                        pattern_text(best->profile.pattern))) {
      best = &p;
    }
  }
  return best;
}

void lock_handles(Sim& sim, const ResourcePattern& pattern) {
  for (HandleId id : sim.live) {
    HandleSim& h = sim.handles.at(id);
    if (h.state == HandleState::Open && pattern_matches(pattern, h.descriptor))
      h.state = HandleState::Locked;
  }
}

std::optional<AccessVerdict> standing(const Sim& sim,
                                      const ResourceDescriptor& descriptor) {
  bool rejected = false;
  for (const SanctionSim& s : sim.sanctions) {
    if (!s.applied) continue;
    if (!pattern_matches(s.rule.pattern, descriptor)) continue;
    if (s.rule.action == SanctionAction::Lock)
      return AccessVerdict::lock(DenyReason::Sanction);
    rejected = true;
  }
  if (rejected) return AccessVerdict::reject(DenyReason::Sanction);
  return std::nullopt;
}

/// Sanction outcome for one violation: most specific matching rule, ties to
/// the earliest configured; deferred rules warn below their threshold.
AccessVerdict punish(Sim& sim, const ResourceDescriptor& descriptor,
                     DenyReason base, int* warnings) {
  int best = -1;
  for (std::size_t i = 0; i < sim.sanctions.size(); ++i) {
    const ResourcePattern& pattern = sim.sanctions[i].rule.pattern;
    if (!pattern_matches(pattern, descriptor)) continue;
    if (best < 0 || pattern_rank(pattern) >
                        pattern_rank(sim.sanctions[best].rule.pattern)) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0) return AccessVerdict::reject(base);
  SanctionSim& s = sim.sanctions[best];

  auto fire = [&]() -> AccessVerdict {
    if (s.rule.action == SanctionAction::Lock) {
      lock_handles(sim, s.rule.pattern);
      return AccessVerdict::lock(base);
    }
    return AccessVerdict::reject(base);
  };

  if (s.applied) return fire();
  if (s.rule.kind == Sanction::Kind::Immediate) {
    AccessVerdict v = fire();
    if (s.rule.action == SanctionAction::Lock) s.applied = true;
    return v;
  }
  ++s.consecutive;
  if (s.consecutive >= s.rule.threshold) {
    s.applied = true;
    return fire();
  }
  ++*warnings;
  return AccessVerdict::reject(base);
}

void conformant(Sim& sim, const ResourceDescriptor& descriptor) {
  for (SanctionSim& s : sim.sanctions) {
    if (s.rule.kind != Sanction::Kind::Deferred || s.applied) continue;
    if (pattern_matches(s.rule.pattern, descriptor)) s.consecutive = 0;
  }
}

/// Full verdict pipeline for one access attempt, state checks included.
AccessVerdict judge(Sim& sim, HandleSim& h, AccessKind kind, Bytes amount,
                    const std::vector<CapSlot>& caps, int* warnings) {
  if (h.state == HandleState::Locked)
    return AccessVerdict::reject(DenyReason::HandleLocked);
  if (h.state == HandleState::Closed)
    return AccessVerdict::reject(DenyReason::HandleClosed);
  if (kind == AccessKind::Free && amount > sim.allocated)
    return AccessVerdict::reject(DenyReason::FreeUnderflow);
  if (auto sv = standing(sim, h.descriptor)) return *sv;

  auto route = sim.routing.find(h.id);
  ProfileSim* p = route == sim.routing.end() ? nullptr
                                             : find_profile(sim, route->second);
  if (!p) return punish(sim, h.descriptor, DenyReason::NoProfile, warnings);

  if (!profile_permits(p->profile, kind))
    return punish(sim, h.descriptor, DenyReason::Permission, warnings);

  Pair bound = quota_pair(p->profile.quota);
  bool over = false;
  switch (kind) {
    case AccessKind::Read:
    case AccessKind::Send:
    case AccessKind::Allocate:
      over = would_exceed(p->used.a, amount, bound.a);
      break;
    case AccessKind::Write:
    case AccessKind::Receive:
      over = would_exceed(p->used.b, amount, bound.b);
      break;
    case AccessKind::Connect:
    case AccessKind::Accept:
    case AccessKind::Free:
      break;
  }
  if (over) return punish(sim, h.descriptor, DenyReason::Quota, warnings);

  if (p->profile.policy == AvailabilityPolicy::BestEffort) {
    bool needs_bytes = kind != AccessKind::Connect &&
                       kind != AccessKind::Accept && kind != AccessKind::Free;
    if (needs_bytes) {
      Bytes available = 0;
      if (auto idx = pick_entry(caps, p->profile.pattern)) {
        const Pair& remaining = caps[*idx].remaining;
        available = (kind == AccessKind::Write || kind == AccessKind::Receive)
                        ? remaining.b
                        : remaining.a;
      }
      if (available < amount) {
        ++*warnings;
        return AccessVerdict::reject(DenyReason::BestEffort);
      }
    }
  }
  return AccessVerdict::allow();
}

void charge(Sim& sim, HandleId handle, AccessKind kind, Bytes amount) {
  auto route = sim.routing.find(handle);
  ProfileSim* p = route == sim.routing.end() ? nullptr
                                             : find_profile(sim, route->second);
  if (!p) return;
  switch (kind) {
    case AccessKind::Read:
    case AccessKind::Send:
    case AccessKind::Allocate:
      p->used.a += amount;
      break;
    case AccessKind::Write:
    case AccessKind::Receive:
      p->used.b += amount;
      break;
    case AccessKind::Free:
      p->used.a -= std::min(p->used.a, amount);
      break;
    case AccessKind::Connect:
    case AccessKind::Accept:
      break;
  }
}

// ------------------------------------------------------------ trace walking

std::string verdict_text(const std::optional<AccessVerdict>& verdict) {
  return verdict ? to_string(*verdict) : "-";
}

std::string describe(const Sim& sim, ResourceEvent::Type type, HandleId handle,
                     const ResourceDescriptor& descriptor,
                     const std::optional<AccessKind>& access, Bytes amount,
                     const std::optional<AccessVerdict>& verdict) {
  std::string out = sim.spec->id + ": " + to_string(type) + " h" +
                    std::to_string(handle) + ":" + to_string(descriptor);
  if (access) out += " " + to_string(*access);
  out += " " + std::to_string(amount) + " " + verdict_text(verdict);
  return out;
}

/// Consumes the component's next trace line and checks it against the
/// replayed event. Field mismatches are flagged but the replay carries on
/// with its own (authoritative) state.
void consume(Ctx& ctx, Sim& sim, ResourceEvent::Type type, HandleId handle,
             const ResourceDescriptor& descriptor,
             std::optional<AccessKind> access, Bytes amount,
             std::optional<AccessVerdict> verdict) {
  if (sim.pending.empty()) {
    ctx.flag(0, "trace ends early; expected: " +
                    describe(sim, type, handle, descriptor, access, amount,
                             verdict));
    throw Abort{};
  }
  auto [line_no, got] = sim.pending.front();
  sim.pending.pop_front();

  if (line_no <= ctx.last_consumed) {
    ctx.flag(line_no, sim.spec->id + ": event out of order across components");
  }
  ctx.last_consumed = std::max(ctx.last_consumed, line_no);

  ++sim.last_seq;
  if (got.sequence != sim.last_seq)
    ctx.flag(line_no, sim.spec->id + ": sequence " +
                          std::to_string(got.sequence) + ", expected " +
                          std::to_string(sim.last_seq));
  if (got.type != type)
    ctx.flag(line_no, sim.spec->id + ": event type " + to_string(got.type) +
                          ", expected " + to_string(type));
  if (got.handle != handle)
    ctx.flag(line_no, sim.spec->id + ": handle h" +
                          std::to_string(got.handle) + ", expected h" +
                          std::to_string(handle));
  if (to_string(got.descriptor) != to_string(descriptor))
    ctx.flag(line_no, sim.spec->id + ": descriptor " +
                          to_string(got.descriptor) + ", expected " +
                          to_string(descriptor));
  if (got.access != access)
    ctx.flag(line_no,
             sim.spec->id + ": access " +
                 (got.access ? to_string(*got.access) : std::string("-")) +
                 ", expected " +
                 (access ? to_string(*access) : std::string("-")));
  if (got.amount != amount)
    ctx.flag(line_no, sim.spec->id + ": amount " + std::to_string(got.amount) +
                          ", expected " + std::to_string(amount));
  if (verdict_text(got.verdict) != verdict_text(verdict))
    ctx.flag(line_no, sim.spec->id + ": verdict " + verdict_text(got.verdict) +
                          ", expected " + verdict_text(verdict));
}

// ------------------------------------------------------------------ replay

struct Replay {
  Ctx& ctx;
  const Scenario& scenario;
  std::vector<CapSlot> caps;
  std::vector<Sim> sims;

  Replay(Ctx& c, const Scenario& s) : ctx(c), scenario(s) {
    caps.reserve(s.capacity.entries.size());
    for (const CapacityEntry& entry : s.capacity.entries)
      caps.push_back(CapSlot{&entry, quota_pair(entry.remaining)});
    sims.resize(s.components.size());
    for (std::size_t i = 0; i < s.components.size(); ++i) {
      sims[i].spec = &s.components[i];
      for (const Sanction& sanction : s.sanctions)
        sims[i].sanctions.push_back(SanctionSim{sanction, 0, false});
    }
  }

  void negotiate() {
    for (Sim& sim : sims) {
      const ComponentSpec& spec = *sim.spec;
      std::map<ContractId, bool> accepted;
      for (const Contract& contract : spec.contracts)
        accepted[contract.id] = admit(caps, contract).accepted;
      if (!spec.subscribe || !accepted[*spec.subscribe]) continue;
      const Contract* target = nullptr;
      for (const Contract& contract : spec.contracts)
        if (contract.id == *spec.subscribe) target = &contract;
      AdmitResult result = admit(caps, *target);
      if (!result.accepted) continue;
      apply_deductions(caps, result.deductions);
      sim.held = std::move(result.deductions);
      sim.contract = *target;
      for (const ResourceUtilisationProfile& profile : target->profiles)
        sim.profiles.push_back(ProfileSim{profile, {}});
      sim.started = true;
    }
  }

  AccessVerdict creation_verdict(Sim& sim, const ResourceDescriptor& descriptor,
                                 int* warnings) {
    if (auto sv = standing(sim, descriptor)) return *sv;
    if (select_profile(sim, descriptor) != nullptr)
      return AccessVerdict::allow();
    return punish(sim, descriptor, DenyReason::NoProfile, warnings);
  }

  void destroy(Sim& sim, HandleId id) {
    HandleSim& h = sim.handles.at(id);
    h.state = HandleState::Closed;
    sim.live.erase(std::remove(sim.live.begin(), sim.live.end(), id),
                   sim.live.end());
    if (sim.pool && *sim.pool == id) {
      sim.pool.reset();
      sim.allocated = 0;
    }
    consume(ctx, sim, ResourceEvent::Type::Destroyed, id, h.descriptor,
            std::nullopt, 0, std::nullopt);
    sim.routing.erase(id);
  }

  /// Creation attempt: Created line, then either a live routed handle or an
  /// immediate Destroyed line when vetoed.
  std::optional<HandleId> create(Sim& sim, ResourceDescriptor descriptor,
                                 AccessVerdict verdict) {
    HandleId id = ++sim.last_handle;
    sim.handles[id] = HandleSim{id, descriptor, HandleState::Open};
    sim.live.push_back(id);
    consume(ctx, sim, ResourceEvent::Type::Created, id, descriptor,
            std::nullopt, 0, verdict);
    if (!verdict.allowed()) {
      destroy(sim, id);
      return std::nullopt;
    }
    if (ProfileSim* p = select_profile(sim, descriptor))
      sim.routing[id] = p->profile.id;
    return id;
  }

  /// One access attempt: AccessRequested line, state effects, and the
  /// AccessCompleted line when allowed.
  AccessVerdict attempt(Sim& sim, HandleId id, AccessKind kind, Bytes amount,
                        int* warnings) {
    HandleSim& h = sim.handles.at(id);
    AccessVerdict verdict = judge(sim, h, kind, amount, caps, warnings);
    consume(ctx, sim, ResourceEvent::Type::AccessRequested, id, h.descriptor,
            kind, amount, verdict);
    if (verdict.kind == AccessVerdict::Kind::Lock &&
        h.state == HandleState::Open)
      h.state = HandleState::Locked;
    if (!verdict.allowed()) return verdict;
    if (kind == AccessKind::Allocate) sim.allocated += amount;
    if (kind == AccessKind::Free) sim.allocated -= amount;
    charge(sim, id, kind, amount);
    conformant(sim, h.descriptor);
    consume(ctx, sim, ResourceEvent::Type::AccessCompleted, id, h.descriptor,
            kind, amount, AccessVerdict::allow());
    return verdict;
  }

  std::optional<HandleId> ensure_pool(Sim& sim, int* warnings) {
    if (sim.pool) return sim.pool;
    ResourceDescriptor descriptor = memory_descriptor(sim.spec->id);
    AccessVerdict verdict = creation_verdict(sim, descriptor, warnings);
    auto id = create(sim, std::move(descriptor), verdict);
    if (id) sim.pool = id;
    return sim.pool;
  }

  void reroute(Sim& sim) {
    for (HandleId id : sim.live) {
      const HandleSim& h = sim.handles.at(id);
      if (ProfileSim* p = select_profile(sim, h.descriptor))
        sim.routing[id] = p->profile.id;
      else
        sim.routing.erase(id);
    }
  }

  void amend(Sim& sim, const Amendment& amendment) {
    Contract amended;
    try {
      amended = apply_amendment(sim.contract, amendment);
    } catch (const AmendmentError& e) {
      ctx.flag(0, sim.spec->id + ": amendment cannot apply: " + e.what());
      throw Abort{};
    }
    std::vector<CapSlot> scratch = caps;
    return_deductions(scratch, sim.held);
    AdmitResult result = admit(scratch, amended);
    if (!result.accepted) return;  // contract in force stays untouched
    apply_deductions(scratch, result.deductions);
    caps = std::move(scratch);
    sim.held = std::move(result.deductions);
    sim.contract = amended;
    // Ledger continuity: retained profile ids keep their usage.
    std::vector<ProfileSim> next;
    for (const ResourceUtilisationProfile& profile : amended.profiles) {
      ProfileSim* old = find_profile(sim, profile.id);
      next.push_back(ProfileSim{profile, old ? old->used : Pair{}});
    }
    sim.profiles = std::move(next);
    reroute(sim);
  }

  void terminate(Sim& sim) {
    return_deductions(caps, sim.held);
    sim.held.clear();
    std::vector<HandleId> open = sim.live;
    for (HandleId id : open) destroy(sim, id);
    sim.terminated = true;
  }

  void turn(Sim& sim) {
    ScriptStep step;
    if (!sim.queued.empty()) {
      step = sim.queued.front();
      sim.queued.pop_front();
    } else {
      step = sim.spec->script[sim.next_step++];
    }
    int warnings = 0;
    switch (step.op) {
      case ScriptStep::Op::OpenFile: {
        auto norm = normalize(step.path);
        ResourceDescriptor descriptor =
            file_descriptor(norm ? *norm : step.path);
        AccessVerdict verdict =
            norm ? creation_verdict(sim, descriptor, &warnings)
                 : AccessVerdict::reject(DenyReason::InvalidPath);
        sim.slots.push_back(create(sim, std::move(descriptor), verdict));
        break;
      }
      case ScriptStep::Op::OpenSocket: {
        ResourceDescriptor descriptor = socket_descriptor(step.host, step.port);
        AccessVerdict verdict = creation_verdict(sim, descriptor, &warnings);
        auto id = create(sim, std::move(descriptor), verdict);
        if (!id) {
          sim.slots.push_back(std::nullopt);
          break;
        }
        // Opening implies connecting; a denied connect forfeits the handle.
        AccessVerdict connect =
            attempt(sim, *id, AccessKind::Connect, 0, &warnings);
        if (!connect.allowed()) {
          if (sim.handles.at(*id).state != HandleState::Closed)
            destroy(sim, *id);
          sim.slots.push_back(std::nullopt);
        } else {
          sim.slots.push_back(id);
        }
        break;
      }
      case ScriptStep::Op::Read:
      case ScriptStep::Op::Write:
      case ScriptStep::Op::Send:
      case ScriptStep::Op::Receive: {
        const auto& slot = sim.slots.at(static_cast<std::size_t>(step.handle));
        if (!slot) break;
        AccessKind kind = step.op == ScriptStep::Op::Read ? AccessKind::Read
                          : step.op == ScriptStep::Op::Write
                              ? AccessKind::Write
                          : step.op == ScriptStep::Op::Send ? AccessKind::Send
                                                            : AccessKind::Receive;
        attempt(sim, *slot, kind, step.bytes, &warnings);
        break;
      }
      case ScriptStep::Op::Close: {
        const auto& slot = sim.slots.at(static_cast<std::size_t>(step.handle));
        if (slot && sim.handles.at(*slot).state != HandleState::Closed)
          destroy(sim, *slot);
        break;
      }
      case ScriptStep::Op::Allocate: {
        if (auto pool = ensure_pool(sim, &warnings))
          attempt(sim, *pool, AccessKind::Allocate, step.bytes, &warnings);
        break;
      }
      case ScriptStep::Op::Free: {
        if (auto pool = ensure_pool(sim, &warnings))
          attempt(sim, *pool, AccessKind::Free, step.bytes, &warnings);
        break;
      }
      case ScriptStep::Op::Amend:
        amend(sim, *step.amendment);
        break;
      case ScriptStep::Op::Terminate:
        terminate(sim);
        break;
    }
    // Mirror the warning protocol: each warning is answered by the next
    // unused handler, queued as the component's next action.
    for (int i = 0; i < warnings; ++i) {
      if (sim.handlers_used >= sim.spec->on_warning.size()) continue;
      const WarningHandler& handler =
          sim.spec->on_warning[sim.handlers_used++];
      ScriptStep inserted;
      if (handler.action == WarningHandler::Action::Amend) {
        inserted.op = ScriptStep::Op::Amend;
        inserted.amendment = handler.amendment;
      } else {
        inserted.op = ScriptStep::Op::Terminate;
      }
      sim.queued.push_back(std::move(inserted));
    }
  }

  void run(std::optional<std::uint64_t> seed) {
    negotiate();
    if (seed) {
      ScheduleRng rng(*seed);
      for (;;) {
        std::vector<Sim*> alive;
        for (Sim& sim : sims)
          if (sim.runnable()) alive.push_back(&sim);
        if (alive.empty()) break;
        turn(*alive[rng.pick(alive.size())]);
      }
    } else {
      bool progressed = true;
      while (progressed) {
        progressed = false;
        for (Sim& sim : sims) {
          if (sim.runnable()) {
            turn(sim);
            progressed = true;
          }
        }
      }
    }
    for (Sim& sim : sims) {
      if (sim.started && !sim.terminated) {
        std::vector<HandleId> open = sim.live;
        for (HandleId id : open) destroy(sim, id);
      }
    }
    for (Sim& sim : sims) {
      while (!sim.pending.empty()) {
        auto [line_no, line] = sim.pending.front();
        sim.pending.pop_front();
        ctx.flag(line_no, sim.spec->id + ": trailing event " +
                              to_string(line.type) + " not produced by the "
                              "scenario");
      }
    }
  }
};

}  // namespace

std::vector<Discrepancy> verify_trace(const std::string& trace_text,
                                      const Scenario& scenario,
                                      std::optional<std::uint64_t> seed) {
  Ctx ctx;
  try {
    // Split by hand to keep real file line numbers for the report.
    std::vector<std::pair<std::size_t, std::string>> raw;
    std::size_t line_no = 0;
    std::size_t at = 0;
    bool saw_header = false;
    while (at <= trace_text.size()) {
      auto nl = trace_text.find('\n', at);
      std::string line = trace_text.substr(
          at, nl == std::string::npos ? std::string::npos : nl - at);
      at = nl == std::string::npos ? trace_text.size() + 1 : nl + 1;
      ++line_no;
      if (line_no == 1) {
        saw_header = line == kTraceHeader;
        if (!saw_header) ctx.flag(1, "missing or malformed trace header");
        continue;
      }
      if (line.empty()) continue;
      raw.emplace_back(line_no, std::move(line));
    }

    Replay replay(ctx, scenario);
    std::map<std::string, Sim*> by_id;
    for (Sim& sim : replay.sims) by_id[sim.spec->id] = &sim;

    for (auto& [no, text] : raw) {
      TraceLine parsed;
      try {
        parsed = parse_trace_line(text, "line " + std::to_string(no));
      } catch (const SchemaError& e) {
        ctx.flag(no, e.what());
        throw Abort{};
      }
      auto it = by_id.find(parsed.component);
      if (it == by_id.end()) {
        ctx.flag(no, "unknown component in trace: " + parsed.component);
        continue;
      }
      it->second->pending.emplace_back(no, std::move(parsed));
    }

    replay.run(seed);
  } catch (const Abort&) {
    // Report what was found so far; the replay cannot continue meaningfully.
  }
  return ctx.out;
}

}  // namespace jamus
