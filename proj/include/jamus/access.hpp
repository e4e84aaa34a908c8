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

#include <optional>
#include <string>

#include "jamus/descriptor.hpp"

namespace jamus {

enum class AccessKind {
  Read,
  Write,
  Connect,
  Accept,
  Send,
  Receive,
  Allocate,
  Free,
};

std::string to_string(AccessKind kind);

/// Resource kind an access applies to.
ResourceKind kind_of(AccessKind access);

/// Reason code attached to non-Allow verdicts. These are part of the trace
/// format and must stay stable.
enum class DenyReason {
  Quota,          // access would exceed the profile quota
  Permission,     // permission flag not granted by the profile
  NoProfile,      // resource matches no clause of the subscribed contract
  Sanction,       // a permanently applied sanction covers the resource
  BestEffort,     // platform capacity exhausted for a best-effort clause
  HandleLocked,   // the handle was locked by an earlier sanction
  HandleClosed,   // the handle was already closed
  FreeUnderflow,  // freeing more memory than currently allocated
  InvalidPath,    // path cannot be resolved in the virtual namespace
};

std::string to_string(DenyReason reason);

struct AccessVerdict {
  enum class Kind { Allow, Reject, Lock };

  Kind kind = Kind::Allow;
  std::optional<DenyReason> reason;  // set iff kind != Allow

  static AccessVerdict allow() { return {Kind::Allow, std::nullopt}; }
  static AccessVerdict reject(DenyReason r) { return {Kind::Reject, r}; }
  static AccessVerdict lock(DenyReason r) { return {Kind::Lock, r}; }

  bool allowed() const { return kind == Kind::Allow; }

  bool operator==(const AccessVerdict&) const = default;
};

/// "allow", "reject:<reason>" or "lock:<reason>".
std::string to_string(const AccessVerdict& verdict);

}  // namespace jamus
