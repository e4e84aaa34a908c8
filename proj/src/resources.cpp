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

#include "jamus/resources.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <stdexcept>
#include <utility>

#include "jamus/path.hpp"

namespace jamus {
namespace {

// Ring and scratch sizes bound the working set of simulated transfers; a
// transfer of any length cycles through the ring in scratch-sized chunks.
constexpr std::size_t kRingCapacity = 1 << 20;
constexpr std::size_t kScratchCapacity = 64 << 10;

}  // namespace

std::string to_string(ResourceEvent::Type type) {
  switch (type) {
    case ResourceEvent::Type::Created: return "created";
    case ResourceEvent::Type::AccessRequested: return "access_requested";
    case ResourceEvent::Type::AccessCompleted: return "access_completed";
    case ResourceEvent::Type::Destroyed: return "destroyed";
  }
  return "?";
}

VirtualResources::VirtualResources(ComponentId component)
    : component_(std::move(component)) {}

void VirtualResources::add_registry_listener(Listener listener) {
  registry_listeners_.push_back(std::move(listener));
}

void VirtualResources::add_handle_listener(HandleId handle, Listener listener) {
  handle_listeners_[handle].push_back(std::move(listener));
}

void VirtualResources::add_creation_interceptor(CreationInterceptor interceptor) {
  creation_interceptors_.push_back(std::move(interceptor));
}

void VirtualResources::add_access_interceptor(AccessInterceptor interceptor) {
  access_interceptors_.push_back(std::move(interceptor));
}

void VirtualResources::set_announce_hook(
    std::function<void(const HandleRecord&)> hook) {
  announce_hook_ = std::move(hook);
}

HandleId VirtualResources::create(ResourceDescriptor descriptor) {
  HandleId id = ++next_handle_;
  records_.emplace(id, HandleRecord{id, std::move(descriptor), HandleState::Open});
  live_.push_back(id);
  return id;
}

void VirtualResources::emit(ResourceEvent event) {
  event.sequence = ++sequence_;
  // Index-based loops: listeners registered during delivery (the tracker
  // subscribes monitors while handling Created) must not invalidate iteration.
  for (std::size_t i = 0; i < registry_listeners_.size(); ++i) {
    registry_listeners_[i](event);
  }
  auto it = handle_listeners_.find(event.handle);
  if (it != handle_listeners_.end()) {
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      it->second[i](event);
    }
  }
}

AccessVerdict VirtualResources::consult_creation(
    const ResourceDescriptor& descriptor) {
  std::optional<AccessVerdict> lock;
  std::optional<AccessVerdict> reject;
  for (const auto& interceptor : creation_interceptors_) {
    AccessVerdict v = interceptor(descriptor);
    if (v.kind == AccessVerdict::Kind::Lock && !lock) lock = v;
    if (v.kind == AccessVerdict::Kind::Reject && !reject) reject = v;
  }
  if (lock) return *lock;
  if (reject) return *reject;
  return AccessVerdict::allow();
}

AccessVerdict VirtualResources::consult_interceptors(const HandleRecord& rec,
                                                     AccessKind kind,
                                                     Bytes amount) {
  std::optional<AccessVerdict> lock;
  std::optional<AccessVerdict> reject;
  for (const auto& interceptor : access_interceptors_) {
    AccessVerdict v = interceptor(rec, kind, amount);
    if (v.kind == AccessVerdict::Kind::Lock && !lock) lock = v;
    if (v.kind == AccessVerdict::Kind::Reject && !reject) reject = v;
  }
  if (lock) return *lock;
  if (reject) return *reject;
  return AccessVerdict::allow();
}

VirtualResources::OpenResult VirtualResources::open_file(
    const std::string& path, const FilePermission& mode) {
  (void)mode;  // declarative; enforcement comes from contract profiles
  auto normalized = normalize_path(path);
  ResourceDescriptor descriptor =
      file_descriptor(normalized ? *normalized : path);
  HandleId id = create(descriptor);
  AccessVerdict verdict = normalized
                              ? consult_creation(descriptor)
                              : AccessVerdict::reject(DenyReason::InvalidPath);
  if (announce_hook_) announce_hook_(records_.at(id));
  emit(ResourceEvent{0, ResourceEvent::Type::Created, id, descriptor,
                     std::nullopt, 0, verdict});
  if (!verdict.allowed()) {
    destroy(id);
    return OpenResult{std::nullopt, verdict};
  }
  files_[*normalized];  // the store auto-creates entries on first open
  return OpenResult{id, verdict};
}

VirtualResources::OpenResult VirtualResources::open_socket(
    const std::string& host, std::uint16_t port) {
  ResourceDescriptor descriptor = socket_descriptor(host, port);
  HandleId id = create(descriptor);
  AccessVerdict verdict = consult_creation(descriptor);
  if (announce_hook_) announce_hook_(records_.at(id));
  emit(ResourceEvent{0, ResourceEvent::Type::Created, id, descriptor,
                     std::nullopt, 0, verdict});
  if (!verdict.allowed()) {
    destroy(id);
    return OpenResult{std::nullopt, verdict};
  }
  // Opening implies establishing the connection; a denied connect leaves the
  // component without a usable handle.
  AccessVerdict connect = access(id, AccessKind::Connect, 0);
  if (!connect.allowed()) {
    close(id);
    return OpenResult{std::nullopt, connect};
  }
  return OpenResult{id, AccessVerdict::allow()};
}

AccessVerdict VirtualResources::access(HandleId handle, AccessKind kind,
                                       Bytes amount) {
  auto it = records_.find(handle);
  if (it == records_.end()) {
    throw std::logic_error("access on unknown handle");
  }
  HandleRecord& rec = it->second;
  if (kind_of(kind) != rec.descriptor.kind()) {
    throw std::logic_error("access kind does not fit resource kind");
  }

  AccessVerdict verdict = AccessVerdict::allow();
  if (rec.state == HandleState::Locked) {
    verdict = AccessVerdict::reject(DenyReason::HandleLocked);
  } else if (rec.state == HandleState::Closed) {
    verdict = AccessVerdict::reject(DenyReason::HandleClosed);
  } else if (kind == AccessKind::Free && amount > allocated_) {
    verdict = AccessVerdict::reject(DenyReason::FreeUnderflow);
  } else {
    verdict = consult_interceptors(rec, kind, amount);
  }

  emit(ResourceEvent{0, ResourceEvent::Type::AccessRequested, handle,
                     rec.descriptor, kind, amount, verdict});
  if (verdict.kind == AccessVerdict::Kind::Lock &&
      rec.state == HandleState::Open) {
    rec.state = HandleState::Locked;
  }
  if (!verdict.allowed()) {
    return verdict;
  }
  apply_effect(rec, kind, amount);
  emit(ResourceEvent{0, ResourceEvent::Type::AccessCompleted, handle,
                     rec.descriptor, kind, amount, AccessVerdict::allow()});
  return verdict;
}

AccessVerdict VirtualResources::allocate(Bytes amount) {
  if (!memory_handle_) {
    ResourceDescriptor descriptor = memory_descriptor(component_);
    HandleId id = create(descriptor);
    AccessVerdict verdict = consult_creation(descriptor);
    if (announce_hook_) announce_hook_(records_.at(id));
    emit(ResourceEvent{0, ResourceEvent::Type::Created, id, descriptor,
                       std::nullopt, 0, verdict});
    if (!verdict.allowed()) {
      destroy(id);
      return verdict;
    }
    memory_handle_ = id;
  }
  return access(*memory_handle_, AccessKind::Allocate, amount);
}

AccessVerdict VirtualResources::free_memory(Bytes amount) {
  if (!memory_handle_) {
    // A free without a pool is still announced, so the attempt is traceable.
    ResourceDescriptor descriptor = memory_descriptor(component_);
    HandleId id = create(descriptor);
    AccessVerdict verdict = consult_creation(descriptor);
    if (announce_hook_) announce_hook_(records_.at(id));
    emit(ResourceEvent{0, ResourceEvent::Type::Created, id, descriptor,
                       std::nullopt, 0, verdict});
    if (!verdict.allowed()) {
      destroy(id);
      return verdict;
    }
    memory_handle_ = id;
  }
  return access(*memory_handle_, AccessKind::Free, amount);
}

void VirtualResources::close(HandleId handle) {
  auto it = records_.find(handle);
  if (it == records_.end()) {
    throw std::logic_error("close on unknown handle");
  }
  if (it->second.state == HandleState::Closed) {
    return;  // idempotent
  }
  destroy(handle);
}

void VirtualResources::close_all() {
  std::vector<HandleId> open = live_;
  for (HandleId id : open) {
    if (records_.at(id).state != HandleState::Closed) {
      destroy(id);
    }
  }
}

void VirtualResources::destroy(HandleId handle) {
  HandleRecord& rec = records_.at(handle);
  rec.state = HandleState::Closed;
  live_.erase(std::remove(live_.begin(), live_.end(), handle), live_.end());
  if (memory_handle_ && *memory_handle_ == handle) {
    memory_handle_.reset();
    allocated_ = 0;
  }
  socket_buffers_.erase(handle);
  emit(ResourceEvent{0, ResourceEvent::Type::Destroyed, handle, rec.descriptor,
                     std::nullopt, 0, AccessVerdict::allow()});
  handle_listeners_.erase(handle);
}

void VirtualResources::lock_matching(const ResourcePattern& pattern) {
  for (HandleId id : live_) {
    HandleRecord& rec = records_.at(id);
    if (rec.state == HandleState::Open && matches(pattern, rec.descriptor)) {
      rec.state = HandleState::Locked;
    }
  }
}

const HandleRecord& VirtualResources::record(HandleId handle) const {
  return records_.at(handle);
}

std::vector<HandleId> VirtualResources::live_handles() const { return live_; }

bool VirtualResources::file_exists(const std::string& path) const {
  auto normalized = normalize_path(path);
  return normalized && files_.count(*normalized) > 0;
}

Bytes VirtualResources::file_size(const std::string& path) const {
  auto normalized = normalize_path(path);
  if (!normalized) return 0;
  auto it = files_.find(*normalized);
  return it == files_.end() ? 0 : it->second.size;
}

void VirtualResources::apply_effect(const HandleRecord& rec, AccessKind kind,
                                    Bytes amount) {
  switch (kind) {
    case AccessKind::Read: {
      auto& file = files_.at(rec.descriptor.file().path);
      std::size_t pos = 0;
      move_bytes(file.ring, pos, amount);
      break;
    }
    case AccessKind::Write: {
      auto& file = files_.at(rec.descriptor.file().path);
      file.size += amount;
      move_bytes(file.ring, file.write_pos, amount);
      break;
    }
    case AccessKind::Send:
    case AccessKind::Receive: {
      auto& buffer = socket_buffers_[rec.id];
      move_bytes(buffer.ring, buffer.write_pos, amount);
      break;
    }
    case AccessKind::Connect:
    case AccessKind::Accept:
      break;
    case AccessKind::Allocate:
      allocated_ += amount;
      break;
    case AccessKind::Free:
      assert(amount <= allocated_);
      allocated_ -= amount;
      break;
  }
}

void VirtualResources::move_bytes(std::vector<char>& ring, std::size_t& pos,
                                  Bytes amount) {
  if (ring.empty()) ring.resize(kRingCapacity);
  if (scratch_.empty()) scratch_.resize(kScratchCapacity);
  Bytes left = amount;
  while (left > 0) {
    std::size_t chunk =
        static_cast<std::size_t>(std::min<Bytes>(left, scratch_.size()));
    chunk = std::min(chunk, ring.size() - pos);
    std::memcpy(ring.data() + pos, scratch_.data(), chunk);
    pos = (pos + chunk) % ring.size();
    left -= chunk;
  }
}

}  // namespace jamus
