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

#include "jamus/contract.hpp"

#include <cassert>
#include <set>
#include <stdexcept>

#include "jamus/path.hpp"

namespace jamus {

std::string to_string(AccessKind kind) {
  switch (kind) {
    case AccessKind::Read: return "read";
    case AccessKind::Write: return "write";
    case AccessKind::Connect: return "connect";
    case AccessKind::Accept: return "accept";
    case AccessKind::Send: return "send";
    case AccessKind::Receive: return "receive";
    case AccessKind::Allocate: return "allocate";
    case AccessKind::Free: return "free";
  }
  return "?";
}

ResourceKind kind_of(AccessKind access) {
  switch (access) {
    case AccessKind::Read:
    case AccessKind::Write: return ResourceKind::File;
    case AccessKind::Connect:
    case AccessKind::Accept:
    case AccessKind::Send:
    case AccessKind::Receive: return ResourceKind::Socket;
    case AccessKind::Allocate:
    case AccessKind::Free: return ResourceKind::Memory;
  }
  return ResourceKind::File;
}

std::string to_string(DenyReason reason) {
  switch (reason) {
    case DenyReason::Quota: return "quota";
    case DenyReason::Permission: return "permission";
    case DenyReason::NoProfile: return "no_profile";
    case DenyReason::Sanction: return "sanction";
    case DenyReason::BestEffort: return "best_effort";
    case DenyReason::HandleLocked: return "handle_locked";
    case DenyReason::HandleClosed: return "handle_closed";
    case DenyReason::FreeUnderflow: return "free_underflow";
    case DenyReason::InvalidPath: return "invalid_path";
  }
  return "?";
}

std::string to_string(const AccessVerdict& verdict) {
  switch (verdict.kind) {
    case AccessVerdict::Kind::Allow: return "allow";
    case AccessVerdict::Kind::Reject: return "reject:" + to_string(*verdict.reason);
    case AccessVerdict::Kind::Lock: return "lock:" + to_string(*verdict.reason);
  }
  return "?";
}

std::string to_string(AvailabilityPolicy policy) {
  return policy == AvailabilityPolicy::BestEffort ? "best_effort"
                                                  : "reservation";
}

bool AccessPermission::any_flag() const {
  switch (kind()) {
    case ResourceKind::File: return file().read || file().write;
    case ResourceKind::Socket: return socket().connect || socket().accept;
    case ResourceKind::Memory: return memory().allocate;
  }
  return false;
}

bool AccessPermission::covers(const AccessPermission& other) const {
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case ResourceKind::File:
      return (file().read || !other.file().read) &&
             (file().write || !other.file().write);
    case ResourceKind::Socket:
      return (socket().connect || !other.socket().connect) &&
             (socket().accept || !other.socket().accept);
    case ResourceKind::Memory:
      return memory().allocate || !other.memory().allocate;
  }
  return false;
}

bool Quota::fits_within(const Quota& other) const {
  assert(kind() == other.kind());
  switch (kind()) {
    case ResourceKind::File:
      return file().read_bytes <= other.file().read_bytes &&
             file().write_bytes <= other.file().write_bytes;
    case ResourceKind::Socket:
      return socket().sent_bytes <= other.socket().sent_bytes &&
             socket().received_bytes <= other.socket().received_bytes;
    case ResourceKind::Memory: return memory().bytes <= other.memory().bytes;
  }
  return false;
}

Quota Quota::plus(const Quota& other) const {
  assert(kind() == other.kind());
  switch (kind()) {
    case ResourceKind::File:
      return file_quota(file().read_bytes + other.file().read_bytes,
                        file().write_bytes + other.file().write_bytes);
    case ResourceKind::Socket:
      return socket_quota(socket().sent_bytes + other.socket().sent_bytes,
                          socket().received_bytes + other.socket().received_bytes);
    case ResourceKind::Memory:
      return memory_quota(memory().bytes + other.memory().bytes);
  }
  return *this;
}

Quota Quota::minus(const Quota& other) const {
  assert(kind() == other.kind());
  assert(other.fits_within(*this));
  switch (kind()) {
    case ResourceKind::File:
      return file_quota(file().read_bytes - other.file().read_bytes,
                        file().write_bytes - other.file().write_bytes);
    case ResourceKind::Socket:
      return socket_quota(socket().sent_bytes - other.socket().sent_bytes,
                          socket().received_bytes - other.socket().received_bytes);
    case ResourceKind::Memory:
      return memory_quota(memory().bytes - other.memory().bytes);
  }
  return *this;
}

Quota Quota::zero(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::File: return file_quota(0, 0);
    case ResourceKind::Socket: return socket_quota(0, 0);
    case ResourceKind::Memory: return memory_quota(0);
  }
  return file_quota(0, 0);
}

const ResourceUtilisationProfile* Contract::find_profile(
    const ProfileId& pid) const {
  for (const auto& p : profiles) {
    if (p.id == pid) return &p;
  }
  return nullptr;
}

bool permits(const ResourceUtilisationProfile& profile, AccessKind access) {
  if (kind_of(access) != profile.kind()) {
    throw std::logic_error("permits: access kind " + to_string(access) +
                           " does not match profile kind " +
                           to_string(profile.kind()));
  }
  switch (access) {
    case AccessKind::Read: return profile.permission.file().read;
    case AccessKind::Write: return profile.permission.file().write;
    case AccessKind::Connect: return profile.permission.socket().connect;
    case AccessKind::Accept: return profile.permission.socket().accept;
    case AccessKind::Send:
    case AccessKind::Receive:
      // Data may move on any socket the component was entitled to establish.
      return profile.permission.socket().connect ||
             profile.permission.socket().accept;
    case AccessKind::Allocate: return profile.permission.memory().allocate;
    case AccessKind::Free: return true;
  }
  return false;
}

std::string to_string(ValidationError::Code code) {
  using Code = ValidationError::Code;
  switch (code) {
    case Code::EmptyContract: return "EmptyContract";
    case Code::DuplicateProfileId: return "DuplicateProfileId";
    case Code::DuplicateMemoryProfile: return "DuplicateMemoryProfile";
    case Code::ProfileKindMismatch: return "ProfileKindMismatch";
    case Code::InvalidPattern: return "InvalidPattern";
    case Code::EmptyPermission: return "EmptyPermission";
  }
  return "?";
}

std::vector<ValidationError> validate_profile(
    const ResourceUtilisationProfile& profile) {
  using Code = ValidationError::Code;
  std::vector<ValidationError> errors;
  const ResourceKind kind = profile.pattern.kind();
  if (profile.permission.kind() != kind || profile.quota.kind() != kind) {
    errors.push_back({Code::ProfileKindMismatch, profile.id,
                      "pattern, permission and quota kinds must agree"});
    return errors;  // further checks assume agreeing kinds
  }
  if (kind == ResourceKind::File &&
      !is_canonical_path(profile.pattern.file().path_prefix)) {
    errors.push_back({Code::InvalidPattern, profile.id,
                      "file pattern is not a canonical path: " +
                          profile.pattern.file().path_prefix});
  }
  if (kind == ResourceKind::Socket) {
    const auto& p = profile.pattern.socket();
    if (p.port && *p.port == 0) {
      errors.push_back({Code::InvalidPattern, profile.id, "port must be 1..65535"});
    }
    if (p.host_glob.empty()) {
      errors.push_back({Code::InvalidPattern, profile.id, "empty host glob"});
    }
  }
  if (!profile.permission.any_flag()) {
    errors.push_back(
        {Code::EmptyPermission, profile.id, "permission grants nothing"});
  }
  return errors;
}

std::vector<ValidationError> validate_contract(const Contract& contract) {
  using Code = ValidationError::Code;
  std::vector<ValidationError> errors;
  if (contract.profiles.empty()) {
    errors.push_back({Code::EmptyContract, "", "contract has no profiles"});
  }
  std::set<ProfileId> seen;
  int memory_profiles = 0;
  for (const auto& profile : contract.profiles) {
    if (!seen.insert(profile.id).second) {
      errors.push_back({Code::DuplicateProfileId, profile.id,
                        "profile id appears more than once"});
    }
    if (profile.pattern.kind() == ResourceKind::Memory) ++memory_profiles;
    auto profile_errors = validate_profile(profile);
    errors.insert(errors.end(), profile_errors.begin(), profile_errors.end());
  }
  if (memory_profiles > 1) {
    errors.push_back({Code::DuplicateMemoryProfile, "",
                      "a contract may hold at most one memory profile"});
  }
  return errors;
}

}  // namespace jamus
