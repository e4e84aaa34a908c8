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
#include <string>
#include <variant>

namespace jamus {

using ComponentId = std::string;
using ProfileId = std::string;
using ContractId = std::string;

enum class ResourceKind { File, Socket, Memory };

std::string to_string(ResourceKind kind);

/// Identifies one concrete reified resource.
struct FileDescriptor {
  std::string path;  // canonical virtual path
  bool operator==(const FileDescriptor&) const = default;
};

struct SocketDescriptor {
  std::string host;
  std::uint16_t port = 0;
  bool operator==(const SocketDescriptor&) const = default;
};

struct MemoryDescriptor {
  ComponentId owner;  // one memory pool per component
  bool operator==(const MemoryDescriptor&) const = default;
};

struct ResourceDescriptor {
  std::variant<FileDescriptor, SocketDescriptor, MemoryDescriptor> value;

  ResourceKind kind() const {
    switch (value.index()) {
      case 0: return ResourceKind::File;
      case 1: return ResourceKind::Socket;
      default: return ResourceKind::Memory;
    }
  }

  const FileDescriptor& file() const { return std::get<FileDescriptor>(value); }
  const SocketDescriptor& socket() const {
    return std::get<SocketDescriptor>(value);
  }
  const MemoryDescriptor& memory() const {
    return std::get<MemoryDescriptor>(value);
  }

  bool operator==(const ResourceDescriptor&) const = default;
};

inline ResourceDescriptor file_descriptor(std::string path) {
  return {FileDescriptor{std::move(path)}};
}
inline ResourceDescriptor socket_descriptor(std::string host,
                                            std::uint16_t port) {
  return {SocketDescriptor{std::move(host), port}};
}
inline ResourceDescriptor memory_descriptor(ComponentId owner) {
  return {MemoryDescriptor{std::move(owner)}};
}

/// Renders "file:<path>", "socket:<host>:<port>" or "memory:<owner>";
/// traces and reports use this form verbatim.
std::string to_string(const ResourceDescriptor& descriptor);

}  // namespace jamus
