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

#include <string>
#include <variant>
#include <vector>

#include "jamus/access.hpp"
#include "jamus/bytes.hpp"
#include "jamus/pattern.hpp"

namespace jamus {

// ---------------------------------------------------------------------------
// Permissions

struct FilePermission {
  bool read = false;
  bool write = false;
  static FilePermission all() { return {true, true}; }
  bool operator==(const FilePermission&) const = default;
};

struct SocketPermission {
  bool connect = false;
  bool accept = false;
  static SocketPermission all() { return {true, true}; }
  bool operator==(const SocketPermission&) const = default;
};

struct MemoryPermission {
  bool allocate = true;
  static MemoryPermission all() { return {true}; }
  bool operator==(const MemoryPermission&) const = default;
};

struct AccessPermission {
  std::variant<FilePermission, SocketPermission, MemoryPermission> value;

  ResourceKind kind() const {
    switch (value.index()) {
      case 0: return ResourceKind::File;
      case 1: return ResourceKind::Socket;
      default: return ResourceKind::Memory;
    }
  }

  const FilePermission& file() const { return std::get<FilePermission>(value); }
  const SocketPermission& socket() const {
    return std::get<SocketPermission>(value);
  }
  const MemoryPermission& memory() const {
    return std::get<MemoryPermission>(value);
  }

  bool any_flag() const;

  /// True iff every flag granted by `other` is also granted here.
  bool covers(const AccessPermission& other) const;

  bool operator==(const AccessPermission&) const = default;
};

inline AccessPermission file_permission(bool read, bool write) {
  return {FilePermission{read, write}};
}
inline AccessPermission socket_permission(bool connect, bool accept) {
  return {SocketPermission{connect, accept}};
}
inline AccessPermission memory_permission() { return {MemoryPermission{}}; }

// ---------------------------------------------------------------------------
// Quotas

struct FileQuota {
  Bytes read_bytes = 0;
  Bytes write_bytes = 0;
  bool operator==(const FileQuota&) const = default;
};

struct SocketQuota {
  Bytes sent_bytes = 0;
  Bytes received_bytes = 0;
  bool operator==(const SocketQuota&) const = default;
};

struct MemoryQuota {
  Bytes bytes = 0;
  bool operator==(const MemoryQuota&) const = default;
};

/// A quota doubles as a two-component (or one-component) byte vector: the
/// broker ledger adds and subtracts quotas component-wise.
struct Quota {
  std::variant<FileQuota, SocketQuota, MemoryQuota> value;

  ResourceKind kind() const {
    switch (value.index()) {
      case 0: return ResourceKind::File;
      case 1: return ResourceKind::Socket;
      default: return ResourceKind::Memory;
    }
  }

  const FileQuota& file() const { return std::get<FileQuota>(value); }
  const SocketQuota& socket() const { return std::get<SocketQuota>(value); }
  const MemoryQuota& memory() const { return std::get<MemoryQuota>(value); }

  /// Component-wise <=. Kinds must agree.
  bool fits_within(const Quota& other) const;

  /// Component-wise arithmetic; kinds must agree. minus saturates at zero
  /// only on programming error (it asserts the invariant instead).
  Quota plus(const Quota& other) const;
  Quota minus(const Quota& other) const;

  static Quota zero(ResourceKind kind);

  bool operator==(const Quota&) const = default;
};

inline Quota file_quota(Bytes read, Bytes write) {
  return {FileQuota{read, write}};
}
inline Quota socket_quota(Bytes sent, Bytes received) {
  return {SocketQuota{sent, received}};
}
inline Quota memory_quota(Bytes bytes) { return {MemoryQuota{bytes}}; }

// ---------------------------------------------------------------------------
// Profiles and contracts

enum class AvailabilityPolicy { BestEffort, Reservation };

std::string to_string(AvailabilityPolicy policy);

/// One contract clause: which resources, which rights, how much, and whether
/// the platform must reserve capacity for them.
struct ResourceUtilisationProfile {
  ProfileId id;
  ResourcePattern pattern;
  AccessPermission permission;
  Quota quota;
  AvailabilityPolicy policy = AvailabilityPolicy::BestEffort;

  ResourceKind kind() const { return pattern.kind(); }

  bool operator==(const ResourceUtilisationProfile&) const = default;
};

struct Contract {
  ContractId id;
  std::vector<ResourceUtilisationProfile> profiles;

  const ResourceUtilisationProfile* find_profile(const ProfileId& pid) const;

  bool operator==(const Contract&) const = default;
};

// ---------------------------------------------------------------------------
// Operations

/// True iff the profile grants the access. Quotas are not consulted.
/// Send/Receive are granted by holding any socket establishment right, and
/// Free is always granted (freeing returns budget, it never takes any).
/// Throws std::logic_error when the access kind does not belong to the
/// profile's resource kind.
bool permits(const ResourceUtilisationProfile& profile, AccessKind access);

struct ValidationError {
  enum class Code {
    EmptyContract,
    DuplicateProfileId,
    DuplicateMemoryProfile,
    ProfileKindMismatch,
    InvalidPattern,
    EmptyPermission,
  };
  Code code;
  ProfileId profile_id;  // empty for contract-level errors
  std::string detail;
};

std::string to_string(ValidationError::Code code);

std::vector<ValidationError> validate_profile(
    const ResourceUtilisationProfile& profile);

/// Empty iff all invariants hold and the contract carries at most one Memory
/// profile (a single pool cannot answer to two simultaneous clauses).
std::vector<ValidationError> validate_contract(const Contract& contract);

}  // namespace jamus
