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

#include "jamus/trace.hpp"

#include <sstream>

#include "jamus/errors.hpp"

namespace jamus {
namespace {

[[noreturn]] void fail(const std::string& location, const std::string& message) {
  throw SchemaError(location, message);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::uint64_t parse_number(const std::string& text,
                           const std::string& location) {
  if (text.empty()) fail(location, "empty number field");
  std::uint64_t value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') fail(location, "malformed number: '" + text + "'");
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return value;
}

std::optional<ResourceEvent::Type> parse_event_type(const std::string& text) {
  if (text == "created") return ResourceEvent::Type::Created;
  if (text == "access_requested") return ResourceEvent::Type::AccessRequested;
  if (text == "access_completed") return ResourceEvent::Type::AccessCompleted;
  if (text == "destroyed") return ResourceEvent::Type::Destroyed;
  return std::nullopt;
}

std::optional<DenyReason> parse_deny_reason(const std::string& text) {
  if (text == "quota") return DenyReason::Quota;
  if (text == "permission") return DenyReason::Permission;
  if (text == "no_profile") return DenyReason::NoProfile;
  if (text == "sanction") return DenyReason::Sanction;
  if (text == "best_effort") return DenyReason::BestEffort;
  if (text == "handle_locked") return DenyReason::HandleLocked;
  if (text == "handle_closed") return DenyReason::HandleClosed;
  if (text == "free_underflow") return DenyReason::FreeUnderflow;
  if (text == "invalid_path") return DenyReason::InvalidPath;
  return std::nullopt;
}

// "h<id>:file:<path>" | "h<id>:socket:<host>:<port>" | "h<id>:memory:<owner>"
std::pair<HandleId, ResourceDescriptor> parse_descriptor(
    const std::string& text, const std::string& location) {
  if (text.size() < 2 || text[0] != 'h') {
    fail(location, "malformed descriptor: '" + text + "'");
  }
  std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    fail(location, "malformed descriptor: '" + text + "'");
  }
  HandleId handle = parse_number(text.substr(1, colon - 1), location);
  std::string rest = text.substr(colon + 1);
  if (rest.rfind("file:", 0) == 0) {
    return {handle, file_descriptor(rest.substr(5))};
  }
  if (rest.rfind("socket:", 0) == 0) {
    std::string endpoint = rest.substr(7);
    std::size_t port_sep = endpoint.rfind(':');
    if (port_sep == std::string::npos || port_sep == 0) {
      fail(location, "malformed socket descriptor: '" + text + "'");
    }
    std::uint64_t port = parse_number(endpoint.substr(port_sep + 1), location);
    if (port < 1 || port > 65535) {
      fail(location, "socket port out of range: '" + text + "'");
    }
    return {handle, socket_descriptor(endpoint.substr(0, port_sep),
                                      static_cast<std::uint16_t>(port))};
  }
  if (rest.rfind("memory:", 0) == 0) {
    return {handle, memory_descriptor(rest.substr(7))};
  }
  fail(location, "unknown descriptor kind: '" + text + "'");
}

}  // namespace

std::optional<AccessKind> parse_access_kind(const std::string& text) {
  if (text == "read") return AccessKind::Read;
  if (text == "write") return AccessKind::Write;
  if (text == "connect") return AccessKind::Connect;
  if (text == "accept") return AccessKind::Accept;
  if (text == "send") return AccessKind::Send;
  if (text == "receive") return AccessKind::Receive;
  if (text == "allocate") return AccessKind::Allocate;
  if (text == "free") return AccessKind::Free;
  return std::nullopt;
}

std::optional<AccessVerdict> parse_verdict(const std::string& text) {
  if (text == "allow") return AccessVerdict::allow();
  if (text.rfind("reject:", 0) == 0) {
    auto reason = parse_deny_reason(text.substr(7));
    if (!reason) return std::nullopt;
    return AccessVerdict::reject(*reason);
  }
  if (text.rfind("lock:", 0) == 0) {
    auto reason = parse_deny_reason(text.substr(5));
    if (!reason) return std::nullopt;
    return AccessVerdict::lock(*reason);
  }
  return std::nullopt;
}

std::string format_trace_line(const ComponentId& component,
                              const ResourceEvent& event) {
  std::string access = event.access ? to_string(*event.access) : "-";
  std::string verdict = event.type == ResourceEvent::Type::Destroyed
                            ? "-"
                            : to_string(event.verdict);
  return std::to_string(event.sequence) + "\t" + component + "\t" +
         to_string(event.type) + "\t" + "h" + std::to_string(event.handle) +
         ":" + to_string(event.descriptor) + "\t" + access + "\t" +
         std::to_string(event.amount) + "\t" + verdict;
}

TraceLine parse_trace_line(const std::string& line,
                           const std::string& location) {
  std::vector<std::string> fields = split_tabs(line);
  if (fields.size() != 7) {
    fail(location, "expected 7 tab-separated fields, got " +
                       std::to_string(fields.size()));
  }
  TraceLine out;
  out.sequence = parse_number(fields[0], location);
  out.component = fields[1];
  if (out.component.empty()) fail(location, "empty component field");
  auto type = parse_event_type(fields[2]);
  if (!type) fail(location, "unknown event variant: '" + fields[2] + "'");
  out.type = *type;
  auto [handle, descriptor] = parse_descriptor(fields[3], location);
  out.handle = handle;
  out.descriptor = std::move(descriptor);
  if (fields[4] != "-") {
    auto access = parse_access_kind(fields[4]);
    if (!access) fail(location, "unknown access kind: '" + fields[4] + "'");
    out.access = access;
  }
  out.amount = parse_number(fields[5], location);
  if (fields[6] != "-") {
    auto verdict = parse_verdict(fields[6]);
    if (!verdict) fail(location, "malformed verdict: '" + fields[6] + "'");
    out.verdict = verdict;
  }

  bool is_access = out.type == ResourceEvent::Type::AccessRequested ||
                   out.type == ResourceEvent::Type::AccessCompleted;
  if (is_access && !out.access) {
    fail(location, "access line without access kind");
  }
  if (!is_access && out.access) {
    fail(location, "non-access line with access kind");
  }
  if (out.type == ResourceEvent::Type::Destroyed && out.verdict) {
    fail(location, "destroyed line with verdict");
  }
  if (out.type != ResourceEvent::Type::Destroyed && !out.verdict) {
    fail(location, "missing verdict");
  }
  return out;
}

std::vector<TraceLine> parse_trace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<TraceLine> lines;
  std::size_t number = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1) {
      if (line != kTraceHeader) {
        fail("line 1", std::string("expected header '") + kTraceHeader + "'");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    lines.push_back(parse_trace_line(line, "line " + std::to_string(number)));
  }
  if (!saw_header) fail("line 1", "empty trace file");
  return lines;
}

}  // namespace jamus
