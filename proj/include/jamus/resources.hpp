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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jamus/access.hpp"
#include "jamus/bytes.hpp"
#include "jamus/contract.hpp"
#include "jamus/descriptor.hpp"
#include "jamus/pattern.hpp"

namespace jamus {

using HandleId = std::uint64_t;

enum class HandleState { Open, Locked, Closed };

struct HandleRecord {
  HandleId id = 0;
  ResourceDescriptor descriptor;
  HandleState state = HandleState::Open;
};

/// Announcement emitted by the resource environment. Creation, destruction
/// and every access attempt produce one; allowed accesses additionally
/// produce a completion once their simulated effect has been applied.
struct ResourceEvent {
  enum class Type { Created, AccessRequested, AccessCompleted, Destroyed };

  std::uint64_t sequence = 0;  // 1-based, per environment
  Type type = Type::Created;
  HandleId handle = 0;
  ResourceDescriptor descriptor;
  std::optional<AccessKind> access;  // set for the two access event types
  Bytes amount = 0;
  AccessVerdict verdict;  // Created: admission result; Destroyed: unused
};

std::string to_string(ResourceEvent::Type type);

/// Reified resources for one hosted component. Files, sockets and the memory
/// pool are simulated in-process: opening registers a handle, accesses move
/// bytes through internal buffers and update usage ledgers, nothing touches
/// the real system. Every action is announced to registered listeners, and
/// interceptors get a chance to veto creations and accesses before their
/// effect is applied. Supervision layers build on those two hooks.
class VirtualResources {
 public:
  using Listener = std::function<void(const ResourceEvent&)>;
  using CreationInterceptor =
      std::function<AccessVerdict(const ResourceDescriptor&)>;
  using AccessInterceptor =
      std::function<AccessVerdict(const HandleRecord&, AccessKind, Bytes)>;

  struct OpenResult {
    std::optional<HandleId> handle;  // empty when the creation was vetoed
    AccessVerdict verdict;
  };

  explicit VirtualResources(ComponentId component);

  const ComponentId& component() const { return component_; }

  // Observation and control hooks. Listener registration order is delivery
  // order; registry listeners run before per-handle listeners.
  void add_registry_listener(Listener listener);
  void add_handle_listener(HandleId handle, Listener listener);
  void add_creation_interceptor(CreationInterceptor interceptor);
  void add_access_interceptor(AccessInterceptor interceptor);
  /// Fired when a resource announces itself, before the registry broadcast.
  void set_announce_hook(std::function<void(const HandleRecord&)> hook);

  // Component-facing operations.
  OpenResult open_file(const std::string& path, const FilePermission& mode);
  /// Opens and connects in one step; a denied connect closes the handle.
  OpenResult open_socket(const std::string& host, std::uint16_t port);
  AccessVerdict access(HandleId handle, AccessKind kind, Bytes amount);
  /// Draws from the component memory pool, creating it on first use.
  AccessVerdict allocate(Bytes amount);
  AccessVerdict free_memory(Bytes amount);
  void close(HandleId handle);
  void close_all();

  // Sanction support: locks every live handle whose descriptor matches.
  // Locked handles reject all further accesses until closed.
  void lock_matching(const ResourcePattern& pattern);

  // Queries.
  const HandleRecord& record(HandleId handle) const;
  std::vector<HandleId> live_handles() const;
  Bytes allocated_bytes() const { return allocated_; }
  bool file_exists(const std::string& path) const;
  Bytes file_size(const std::string& path) const;
  std::uint64_t next_sequence() const { return sequence_ + 1; }

 private:
  struct VirtualFile {
    Bytes size = 0;
    std::vector<char> ring;  // allocated on first byte moved
    std::size_t write_pos = 0;
  };

  HandleId create(ResourceDescriptor descriptor);
  void emit(ResourceEvent event);
  AccessVerdict consult_interceptors(const HandleRecord& rec, AccessKind kind,
                                     Bytes amount);
  AccessVerdict consult_creation(const ResourceDescriptor& descriptor);
  void destroy(HandleId handle);
  void apply_effect(const HandleRecord& rec, AccessKind kind, Bytes amount);
  void move_bytes(std::vector<char>& ring, std::size_t& pos, Bytes amount);

  ComponentId component_;
  std::uint64_t sequence_ = 0;
  HandleId next_handle_ = 0;
  std::map<HandleId, HandleRecord> records_;
  std::vector<HandleId> live_;  // creation order, for deterministic teardown
  std::map<std::string, VirtualFile> files_;
  std::map<HandleId, VirtualFile> socket_buffers_;
  Bytes allocated_ = 0;
  std::optional<HandleId> memory_handle_;
  std::vector<Listener> registry_listeners_;
  std::map<HandleId, std::vector<Listener>> handle_listeners_;
  std::vector<CreationInterceptor> creation_interceptors_;
  std::vector<AccessInterceptor> access_interceptors_;
  std::function<void(const HandleRecord&)> announce_hook_;
  std::vector<char> scratch_;  // shared source/sink for simulated transfers
};

}  // namespace jamus
