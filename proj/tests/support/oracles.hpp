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

// Test-only reference implementations and random instance generators. The
// admission oracle recomputes broker decisions from first principles with
// plain integer pairs and string handling, sharing no code with the library
// beyond the public value types, so that a bug in the production arithmetic
// cannot hide in its own mirror.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jamus/broker.hpp"
#include "jamus/contract.hpp"
#include "jamus/pattern.hpp"

namespace jamus::testing {

// ---------------------------------------------------------------------------
// Brute-force admission oracle

/// Quota flattened to two independent byte axes: file (read, write), socket
/// (sent, received), memory (bytes, 0).
struct BytePair {
  long long a = 0;
  long long b = 0;
};

inline BytePair byte_pair(const Quota& q) {
  switch (q.kind()) {
    case ResourceKind::File:
      return {static_cast<long long>(q.file().read_bytes),
              static_cast<long long>(q.file().write_bytes)};
    case ResourceKind::Socket:
      return {static_cast<long long>(q.socket().sent_bytes),
              static_cast<long long>(q.socket().received_bytes)};
    case ResourceKind::Memory:
      return {static_cast<long long>(q.memory().bytes), 0};
  }
  return {};
}

inline std::string oracle_render(const ResourcePattern& p) {
  switch (p.kind()) {
    case ResourceKind::File:
      return "file:" + p.file().path_prefix;
    case ResourceKind::Socket:
      return "socket:" + p.socket().host_glob + ":" +
             (p.socket().port ? std::to_string(*p.socket().port)
                              : std::string("any"));
    case ResourceKind::Memory:
      return "memory";
  }
  return "?";
}

/// Segment-aware prefix test written with nothing but std::string ops.
inline bool oracle_path_under(const std::string& path,
                              const std::string& prefix) {
  if (path == prefix) return true;
  if (path.size() <= prefix.size()) return false;
  if (path.compare(0, prefix.size(), prefix) != 0) return false;
  // Roots "/" and "~" already end at a boundary; others need a '/' next.
  if (prefix == "/" ) return true;
  return path[prefix.size()] == '/';
}

inline bool oracle_subsumes(const ResourcePattern& outer,
                            const ResourcePattern& inner) {
  if (outer.kind() != inner.kind()) return false;
  switch (outer.kind()) {
    case ResourceKind::File:
      return oracle_path_under(inner.file().path_prefix,
                               outer.file().path_prefix);
    case ResourceKind::Socket: {
      const auto& o = outer.socket();
      const auto& i = inner.socket();
      if (o.host_glob != "*" && o.host_glob != i.host_glob) return false;
      if (o.port && (!i.port || *o.port != *i.port)) return false;
      return true;
    }
    case ResourceKind::Memory:
      return true;
  }
  return false;
}

inline int oracle_specificity(const ResourcePattern& p) {
  switch (p.kind()) {
    case ResourceKind::File:
      return static_cast<int>(p.file().path_prefix.size());
    case ResourceKind::Socket:
      return (p.socket().host_glob != "*" ? 1 : 0) +
             (p.socket().port ? 1 : 0);
    case ResourceKind::Memory:
      return 0;
  }
  return 0;
}

inline std::optional<std::size_t> oracle_match(
    const PlatformCapacity& capacity, const ResourcePattern& pattern) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < capacity.entries.size(); ++i) {
    const ResourcePattern& cand = capacity.entries[i].pattern;
    if (!oracle_subsumes(cand, pattern)) continue;
    if (!best) {
      best = i;
      continue;
    }
    const ResourcePattern& inc = capacity.entries[*best].pattern;
    int cs = oracle_specificity(cand);
    int is = oracle_specificity(inc);
    if (cs > is || (cs == is && oracle_render(cand) < oracle_render(inc))) {
      best = i;
    }
  }
  return best;
}

inline bool oracle_permission_covers(const AccessPermission& outer,
                                     const AccessPermission& inner) {
  if (outer.kind() != inner.kind()) return false;
  switch (outer.kind()) {
    case ResourceKind::File:
      return (outer.file().read || !inner.file().read) &&
             (outer.file().write || !inner.file().write);
    case ResourceKind::Socket:
      return (outer.socket().connect || !inner.socket().connect) &&
             (outer.socket().accept || !inner.socket().accept);
    case ResourceKind::Memory:
      return outer.memory().allocate || !inner.memory().allocate;
  }
  return false;
}

struct OracleDecision {
  bool accepted = false;
  std::vector<ConflictingClause> conflicts;
  /// Scratch remaining per entry after sequential reservation deductions;
  /// meaningful whether or not the contract was accepted.
  std::vector<BytePair> remaining;
};

/// Recomputes evaluate_contract clause by clause with naive arithmetic.
inline OracleDecision oracle_admit(const PlatformCapacity& capacity,
                                   const Contract& contract) {
  OracleDecision out;
  for (const CapacityEntry& e : capacity.entries) {
    out.remaining.push_back(byte_pair(e.remaining));
  }
  for (const ResourceUtilisationProfile& clause : contract.profiles) {
    auto idx = oracle_match(capacity, clause.pattern);
    if (!idx) {
      out.conflicts.push_back(
          {clause.id, ConflictReason::NoMatchingCapacity, std::nullopt});
      continue;
    }
    const CapacityEntry& entry = capacity.entries[*idx];
    if (!oracle_permission_covers(entry.permission, clause.permission)) {
      out.conflicts.push_back(
          {clause.id, ConflictReason::PermissionDenied, std::nullopt});
      continue;
    }
    BytePair need = byte_pair(clause.quota);
    BytePair have = out.remaining[*idx];
    if (need.a > have.a || need.b > have.b) {
      // Report what the entry could still offer, in the entry's own kind.
      Quota avail = Quota::zero(entry.pattern.kind());
      switch (entry.pattern.kind()) {
        case ResourceKind::File:
          avail = file_quota(static_cast<Bytes>(have.a),
                             static_cast<Bytes>(have.b));
          break;
        case ResourceKind::Socket:
          avail = socket_quota(static_cast<Bytes>(have.a),
                               static_cast<Bytes>(have.b));
          break;
        case ResourceKind::Memory:
          avail = memory_quota(static_cast<Bytes>(have.a));
          break;
      }
      out.conflicts.push_back({clause.id, ConflictReason::QuotaExceeded, avail});
      continue;
    }
    if (clause.policy == AvailabilityPolicy::Reservation) {
      out.remaining[*idx].a -= need.a;
      out.remaining[*idx].b -= need.b;
    }
  }
  out.accepted = out.conflicts.empty();
  return out;
}

inline bool same_conflicts(const std::vector<ConflictingClause>& lhs,
                           const std::vector<ConflictingClause>& rhs) {
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i].profile_id != rhs[i].profile_id) return false;
    if (lhs[i].reason != rhs[i].reason) return false;
    if (lhs[i].available.has_value() != rhs[i].available.has_value())
      return false;
    if (lhs[i].available && !(*lhs[i].available == *rhs[i].available))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Random instance generation

class InstanceGen {
 public:
  explicit InstanceGen(std::uint64_t seed) : gen_(seed) {}

  std::mt19937_64& rng() { return gen_; }

  int uniform(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool chance(int percent) { return uniform(1, 100) <= percent; }

  /// Byte amounts in whole Ko so quota comparisons hit boundaries often.
  Bytes bytes_upto(int max_ko) {
    return static_cast<Bytes>(uniform(0, max_ko)) * 1024;
  }

  ResourcePattern pattern() {
    switch (uniform(0, 5)) {
      case 0: case 1: case 2: return file_pattern(pick(kPrefixes));
      case 3: case 4:
        return socket_pattern(pick(kHosts), chance(60)
                                  ? std::optional<std::uint16_t>(pick_port())
                                  : std::nullopt);
      default: return memory_pattern();
    }
  }

  AccessPermission permission_for(ResourceKind kind, bool allow_empty) {
    for (;;) {
      AccessPermission p;
      switch (kind) {
        case ResourceKind::File:
          p = file_permission(chance(70), chance(70));
          break;
        case ResourceKind::Socket:
          p = socket_permission(chance(70), chance(40));
          break;
        case ResourceKind::Memory:
          p = memory_permission();
          break;
      }
      if (allow_empty || p.any_flag()) return p;
    }
  }

  Quota quota_for(ResourceKind kind, int max_ko) {
    switch (kind) {
      case ResourceKind::File:
        return file_quota(bytes_upto(max_ko), bytes_upto(max_ko));
      case ResourceKind::Socket:
        return socket_quota(bytes_upto(max_ko), bytes_upto(max_ko));
      case ResourceKind::Memory:
        return memory_quota(bytes_upto(max_ko));
    }
    return memory_quota(0);
  }

  PlatformCapacity capacity(int max_entries) {
    PlatformCapacity cap;
    int n = uniform(1, max_entries);
    for (int i = 0; i < n; ++i) {
      ResourcePattern pat = pattern();
      Quota q = quota_for(pat.kind(), 64);
      cap.entries.push_back(
          {pat, permission_for(pat.kind(), /*allow_empty=*/false), q, q});
    }
    return cap;
  }

  Contract contract(const std::string& id, int max_clauses) {
    Contract c;
    c.id = id;
    int n = uniform(1, max_clauses);
    bool memory_used = false;
    for (int i = 0; i < n; ++i) {
      ResourcePattern pat = pattern();
      if (pat.kind() == ResourceKind::Memory) {
        if (memory_used) {
          pat = file_pattern(pick(kPrefixes));
        } else {
          memory_used = true;
        }
      }
      ResourceUtilisationProfile p;
      p.id = "p" + std::to_string(i);
      p.pattern = pat;
      p.permission = permission_for(pat.kind(), /*allow_empty=*/false);
      p.quota = quota_for(pat.kind(), 48);
      p.policy = chance(50) ? AvailabilityPolicy::Reservation
                            : AvailabilityPolicy::BestEffort;
      c.profiles.push_back(std::move(p));
    }
    return c;
  }

 private:
  template <std::size_t N>
  std::string pick(const char* const (&pool)[N]) {
    return pool[gen_() % N];
  }

  std::uint16_t pick_port() {
    static constexpr std::uint16_t kPorts[] = {25, 80, 443, 8080};
    return kPorts[gen_() % 4];
  }

  static constexpr const char* kPrefixes[] = {
      "~",      "~/a",    "~/a/b", "~/b",      "/tmp",
      "/tmp/x", "/var",   "/var/log", "/srv",  "~/a/b/c",
  };
  static constexpr const char* kHosts[] = {"*", "example.org",
                                           "mail.example.org"};

  std::mt19937_64 gen_;
};

}  // namespace jamus::testing
