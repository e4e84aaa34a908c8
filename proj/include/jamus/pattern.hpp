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
#include <optional>
#include <string>
#include <variant>

#include "jamus/descriptor.hpp"

namespace jamus {

/// Matches a file subtree by canonical path prefix.
struct FilePattern {
  std::string path_prefix;
  bool operator==(const FilePattern&) const = default;
};

/// Matches a family of socket endpoints. host_glob is either "*" or an exact
/// hostname; port is nullopt for ANY.
struct SocketPattern {
  std::string host_glob = "*";
  std::optional<std::uint16_t> port;
  bool operator==(const SocketPattern&) const = default;
};

/// Matches the component's whole memory pool.
struct MemoryPattern {
  bool operator==(const MemoryPattern&) const = default;
};

struct ResourcePattern {
  std::variant<FilePattern, SocketPattern, MemoryPattern> value;

  ResourceKind kind() const {
    switch (value.index()) {
      case 0: return ResourceKind::File;
      case 1: return ResourceKind::Socket;
      default: return ResourceKind::Memory;
    }
  }

  const FilePattern& file() const { return std::get<FilePattern>(value); }
  const SocketPattern& socket() const { return std::get<SocketPattern>(value); }

  bool operator==(const ResourcePattern&) const = default;
};

inline ResourcePattern file_pattern(std::string prefix) {
  return {FilePattern{std::move(prefix)}};
}
inline ResourcePattern socket_pattern(std::string host,
                                      std::optional<std::uint16_t> port) {
  return {SocketPattern{std::move(host), port}};
}
inline ResourcePattern memory_pattern() { return {MemoryPattern{}}; }

/// True iff the descriptor belongs to the family the pattern names. File
/// matching is path-segment-aware prefix matching, never substring matching.
/// Total: a kind mismatch is simply false.
bool matches(const ResourcePattern& pattern,
             const ResourceDescriptor& descriptor);

/// True iff every resource matched by `inner` is also matched by `outer`
/// (same kind required). Used to charge contract clauses to capacity entries.
bool subsumes(const ResourcePattern& outer, const ResourcePattern& inner);

/// Specificity score, comparable within one kind only: File patterns by
/// prefix length, Socket patterns by number of constrained fields, Memory
/// patterns all equal.
int specificity(const ResourcePattern& pattern);

/// Stable total order key used for deterministic tie-breaking.
std::string sort_key(const ResourcePattern& pattern);

/// "file:~/.jmailer", "socket:*:80", "socket:example.org:any", "memory".
std::string to_string(const ResourcePattern& pattern);

}  // namespace jamus
