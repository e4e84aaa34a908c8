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

#include "jamus/pattern.hpp"

#include "jamus/path.hpp"

namespace jamus {

std::string to_string(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::File: return "file";
    case ResourceKind::Socket: return "socket";
    case ResourceKind::Memory: return "memory";
  }
  return "?";
}

std::string to_string(const ResourceDescriptor& descriptor) {
  switch (descriptor.kind()) {
    case ResourceKind::File: return "file:" + descriptor.file().path;
    case ResourceKind::Socket:
      return "socket:" + descriptor.socket().host + ":" +
             std::to_string(descriptor.socket().port);
    case ResourceKind::Memory: return "memory:" + descriptor.memory().owner;
  }
  return "?";
}

bool matches(const ResourcePattern& pattern,
             const ResourceDescriptor& descriptor) {
  if (pattern.kind() != descriptor.kind()) return false;
  switch (pattern.kind()) {
    case ResourceKind::File:
      return path_has_prefix(descriptor.file().path,
                             pattern.file().path_prefix);
    case ResourceKind::Socket: {
      const auto& p = pattern.socket();
      const auto& d = descriptor.socket();
      if (p.host_glob != "*" && p.host_glob != d.host) return false;
      return !p.port || *p.port == d.port;
    }
    case ResourceKind::Memory: return true;
  }
  return false;
}

bool subsumes(const ResourcePattern& outer, const ResourcePattern& inner) {
  if (outer.kind() != inner.kind()) return false;
  switch (outer.kind()) {
    case ResourceKind::File:
      return path_has_prefix(inner.file().path_prefix,
                             outer.file().path_prefix);
    case ResourceKind::Socket: {
      const auto& o = outer.socket();
      const auto& i = inner.socket();
      if (o.host_glob != "*" && o.host_glob != i.host_glob) return false;
      return !o.port || (i.port && *o.port == *i.port);
    }
    case ResourceKind::Memory: return true;
  }
  return false;
}

int specificity(const ResourcePattern& pattern) {
  switch (pattern.kind()) {
    case ResourceKind::File:
      return static_cast<int>(pattern.file().path_prefix.size());
    case ResourceKind::Socket: {
      const auto& p = pattern.socket();
      return (p.host_glob != "*" ? 1 : 0) + (p.port ? 1 : 0);
    }
    case ResourceKind::Memory: return 0;
  }
  return 0;
}

std::string sort_key(const ResourcePattern& pattern) {
  return to_string(pattern);
}

std::string to_string(const ResourcePattern& pattern) {
  switch (pattern.kind()) {
    case ResourceKind::File: return "file:" + pattern.file().path_prefix;
    case ResourceKind::Socket: {
      const auto& p = pattern.socket();
      return "socket:" + p.host_glob + ":" +
             (p.port ? std::to_string(*p.port) : "any");
    }
    case ResourceKind::Memory: return "memory";
  }
  return "?";
}

}  // namespace jamus
