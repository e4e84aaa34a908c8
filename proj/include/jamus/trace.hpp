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
#include <vector>

#include "jamus/resources.hpp"

namespace jamus {

// Trace files: a header line, then one tab-separated line per event:
//   sequence  component  variant  descriptor  access  amount  verdict
// sequence is per component. descriptor is "h<id>:" plus the rendered
// descriptor. access is "-" for created/destroyed lines; verdict is "-" for
// destroyed lines. The format is bit-exact: reordering, reformatting or
// renumbering makes verification fail.

inline constexpr const char* kTraceHeader = "# jamus-trace v1";

struct TraceLine {
  std::uint64_t sequence = 0;
  ComponentId component;
  ResourceEvent::Type type = ResourceEvent::Type::Created;
  HandleId handle = 0;
  ResourceDescriptor descriptor;
  std::optional<AccessKind> access;
  Bytes amount = 0;
  std::optional<AccessVerdict> verdict;  // empty for destroyed lines
};

std::string format_trace_line(const ComponentId& component,
                              const ResourceEvent& event);

/// Parses one event line. `location` names the line in error messages.
TraceLine parse_trace_line(const std::string& line, const std::string& location);

/// Parses a whole trace document including the header line.
std::vector<TraceLine> parse_trace(const std::string& text);

std::optional<AccessKind> parse_access_kind(const std::string& text);
std::optional<AccessVerdict> parse_verdict(const std::string& text);

}  // namespace jamus
