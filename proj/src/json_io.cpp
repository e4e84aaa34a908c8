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

#include "jamus/json_io.hpp"

#include <fstream>
#include <limits>

#include "jamus/errors.hpp"
#include "jamus/path.hpp"

namespace jamus {

bool is_count(const json& v) {
  if (v.is_number_unsigned()) return true;
  return v.is_number_integer() && v.get<std::int64_t>() >= 0;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw SchemaError(path, message);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& j, const char* key,
                           const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) fail(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

bool require_bool(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_boolean()) fail(path + "/" + key, "expected a boolean");
  return v.get<bool>();
}

Bytes require_bytes(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!is_count(v)) {
    fail(path + "/" + key, "expected a non-negative integer");
  }
  return v.get<Bytes>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(path, "unknown field '" + it.key() + "'");
  }
}

}  // namespace

json load_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) fail(file, "cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(file, e.what());
  }
  return j;
}

// ---------------------------------------------------------------------------
// Patterns

ResourcePattern parse_pattern(const json& j, const std::string& path) {
  std::string kind = require_string(j, "kind", path);
  if (kind == "file") {
    reject_unknown(j, {"kind", "prefix"}, path);
    std::string prefix = require_string(j, "prefix", path);
    if (!is_canonical_path(prefix)) {
      fail(path + "/prefix", "not a canonical path: '" + prefix + "'");
    }
    return file_pattern(std::move(prefix));
  }
  if (kind == "socket") {
    reject_unknown(j, {"kind", "host", "port"}, path);
    std::string host = require_string(j, "host", path);
    if (host.empty()) fail(path + "/host", "host glob must not be empty");
    std::optional<std::uint16_t> port;
    auto it = j.find("port");
    if (it != j.end() && !it->is_null()) {
      if (it->is_string()) {
        if (it->get<std::string>() != "any") {
          fail(path + "/port", "expected a port number or \"any\"");
        }
      } else if (is_count(*it)) {
        auto value = it->get<std::uint64_t>();
        if (value < 1 || value > 65535) {
          fail(path + "/port", "port out of range 1..65535");
        }
        port = static_cast<std::uint16_t>(value);
      } else {
        fail(path + "/port", "expected a port number or \"any\"");
      }
    }
    return socket_pattern(std::move(host), port);
  }
  if (kind == "memory") {
    reject_unknown(j, {"kind"}, path);
    return memory_pattern();
  }
  fail(path + "/kind", "unknown pattern kind '" + kind + "'");
}

json json_of(const ResourcePattern& pattern) {
  switch (pattern.kind()) {
    case ResourceKind::File:
      return {{"kind", "file"}, {"prefix", pattern.file().path_prefix}};
    case ResourceKind::Socket: {
      json j = {{"kind", "socket"}, {"host", pattern.socket().host_glob}};
      if (pattern.socket().port) {
        j["port"] = *pattern.socket().port;
      } else {
        j["port"] = "any";
      }
      return j;
    }
    case ResourceKind::Memory:
      return {{"kind", "memory"}};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Permissions and quotas

AccessPermission parse_permission(const json& j, ResourceKind kind,
                                  const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  switch (kind) {
    case ResourceKind::File:
      reject_unknown(j, {"read", "write"}, path);
      return file_permission(require_bool(j, "read", path),
                             require_bool(j, "write", path));
    case ResourceKind::Socket:
      reject_unknown(j, {"connect", "accept"}, path);
      return socket_permission(require_bool(j, "connect", path),
                               require_bool(j, "accept", path));
    case ResourceKind::Memory:
      reject_unknown(j, {"allocate"}, path);
      if (j.contains("allocate") && !require_bool(j, "allocate", path)) {
        fail(path + "/allocate", "memory permission cannot be withdrawn");
      }
      return memory_permission();
  }
  fail(path, "unreachable permission kind");
}

json json_of(const AccessPermission& permission) {
  switch (permission.kind()) {
    case ResourceKind::File:
      return {{"read", permission.file().read},
              {"write", permission.file().write}};
    case ResourceKind::Socket:
      return {{"connect", permission.socket().connect},
              {"accept", permission.socket().accept}};
    case ResourceKind::Memory:
      return {{"allocate", true}};
  }
  return {};
}

Quota parse_quota(const json& j, ResourceKind kind, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  switch (kind) {
    case ResourceKind::File:
      reject_unknown(j, {"read_bytes", "write_bytes"}, path);
      return file_quota(require_bytes(j, "read_bytes", path),
                        require_bytes(j, "write_bytes", path));
    case ResourceKind::Socket:
      reject_unknown(j, {"sent_bytes", "received_bytes"}, path);
      return socket_quota(require_bytes(j, "sent_bytes", path),
                          require_bytes(j, "received_bytes", path));
    case ResourceKind::Memory:
      reject_unknown(j, {"bytes"}, path);
      return memory_quota(require_bytes(j, "bytes", path));
  }
  fail(path, "unreachable quota kind");
}

json json_of(const Quota& quota) {
  switch (quota.kind()) {
    case ResourceKind::File:
      return {{"read_bytes", quota.file().read_bytes},
              {"write_bytes", quota.file().write_bytes}};
    case ResourceKind::Socket:
      return {{"sent_bytes", quota.socket().sent_bytes},
              {"received_bytes", quota.socket().received_bytes}};
    case ResourceKind::Memory:
      return {{"bytes", quota.memory().bytes}};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Profiles, contracts, amendments

ResourceUtilisationProfile parse_profile(const json& j,
                                         const std::string& path) {
  reject_unknown(j, {"id", "pattern", "permission", "quota", "policy"}, path);
  ResourceUtilisationProfile profile;
  profile.id = require_string(j, "id", path);
  if (profile.id.empty()) fail(path + "/id", "profile id must not be empty");
  profile.pattern = parse_pattern(require(j, "pattern", path), path + "/pattern");
  ResourceKind kind = profile.pattern.kind();
  profile.permission =
      parse_permission(require(j, "permission", path), kind, path + "/permission");
  profile.quota = parse_quota(require(j, "quota", path), kind, path + "/quota");
  std::string policy = require_string(j, "policy", path);
  if (policy == "best_effort") {
    profile.policy = AvailabilityPolicy::BestEffort;
  } else if (policy == "reservation") {
    profile.policy = AvailabilityPolicy::Reservation;
  } else {
    fail(path + "/policy", "expected \"best_effort\" or \"reservation\"");
  }
  return profile;
}

json json_of(const ResourceUtilisationProfile& profile) {
  return {{"id", profile.id},
          {"pattern", json_of(profile.pattern)},
          {"permission", json_of(profile.permission)},
          {"quota", json_of(profile.quota)},
          {"policy", to_string(profile.policy)}};
}

Contract parse_contract(const json& j, const std::string& path) {
  reject_unknown(j, {"id", "profiles"}, path);
  Contract contract;
  contract.id = require_string(j, "id", path);
  const json& profiles = require(j, "profiles", path);
  if (!profiles.is_array()) fail(path + "/profiles", "expected an array");
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    contract.profiles.push_back(parse_profile(
        profiles[i], path + "/profiles/" + std::to_string(i)));
  }
  return contract;
}

json json_of(const Contract& contract) {
  json profiles = json::array();
  for (const ResourceUtilisationProfile& profile : contract.profiles) {
    profiles.push_back(json_of(profile));
  }
  return {{"id", contract.id}, {"profiles", std::move(profiles)}};
}

Amendment parse_amendment(const json& j, const std::string& path) {
  reject_unknown(j, {"contract_id", "clauses"}, path);
  Amendment amendment;
  amendment.contract_id = require_string(j, "contract_id", path);
  const json& clauses = require(j, "clauses", path);
  if (!clauses.is_array() || clauses.empty()) {
    fail(path + "/clauses", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const json& cj = clauses[i];
    std::string cpath = path + "/clauses/" + std::to_string(i);
    std::string op = require_string(cj, "op", cpath);
    if (op == "add") {
      reject_unknown(cj, {"op", "profile"}, cpath);
      amendment.clauses.push_back(AmendmentClause::add(
          parse_profile(require(cj, "profile", cpath), cpath + "/profile")));
    } else if (op == "remove") {
      reject_unknown(cj, {"op", "target"}, cpath);
      amendment.clauses.push_back(
          AmendmentClause::remove(require_string(cj, "target", cpath)));
    } else if (op == "modify") {
      reject_unknown(cj, {"op", "target", "profile"}, cpath);
      std::string target = require_string(cj, "target", cpath);
      json payload = require(cj, "profile", cpath);
      // The payload's id is implied by the target.
      if (!payload.contains("id")) payload["id"] = target;
      ResourceUtilisationProfile profile =
          parse_profile(payload, cpath + "/profile");
      if (profile.id != target) {
        fail(cpath + "/profile/id", "payload id differs from target");
      }
      amendment.clauses.push_back(
          AmendmentClause::modify(std::move(target), std::move(profile)));
    } else {
      fail(cpath + "/op", "expected \"add\", \"remove\" or \"modify\"");
    }
  }
  return amendment;
}

// ---------------------------------------------------------------------------
// Capacity and sanctions

PlatformCapacity parse_capacity(const json& j, const std::string& path) {
  reject_unknown(j, {"schema_version", "entries"}, path);
  const json& entries = require(j, "entries", path);
  if (!entries.is_array()) fail(path + "/entries", "expected an array");
  PlatformCapacity capacity;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const json& ej = entries[i];
    std::string epath = path + "/entries/" + std::to_string(i);
    reject_unknown(ej, {"pattern", "permission", "quota"}, epath);
    CapacityEntry entry;
    entry.pattern = parse_pattern(require(ej, "pattern", epath), epath + "/pattern");
    ResourceKind kind = entry.pattern.kind();
    entry.permission = parse_permission(require(ej, "permission", epath), kind,
                                        epath + "/permission");
    entry.initial = parse_quota(require(ej, "quota", epath), kind, epath + "/quota");
    entry.remaining = entry.initial;
    capacity.entries.push_back(std::move(entry));
  }
  return capacity;
}

json json_of(const CapacityEntry& entry) {
  return {{"pattern", json_of(entry.pattern)},
          {"permission", json_of(entry.permission)},
          {"initial", json_of(entry.initial)},
          {"remaining", json_of(entry.remaining)}};
}

json json_of(const PlatformCapacity& capacity) {
  json entries = json::array();
  for (const CapacityEntry& entry : capacity.entries) {
    entries.push_back(json_of(entry));
  }
  return {{"entries", std::move(entries)}};
}

Sanction parse_sanction(const json& j, const std::string& path) {
  Sanction sanction;
  std::string kind = require_string(j, "kind", path);
  if (kind == "immediate") {
    reject_unknown(j, {"kind", "pattern", "action"}, path);
    sanction.kind = Sanction::Kind::Immediate;
    sanction.threshold = 1;
  } else if (kind == "deferred") {
    reject_unknown(j, {"kind", "pattern", "action", "threshold"}, path);
    sanction.kind = Sanction::Kind::Deferred;
    const json& t = require(j, "threshold", path);
    if (!is_count(t) || t.get<std::uint64_t>() < 1 ||
        t.get<std::uint64_t>() > std::numeric_limits<int>::max()) {
      fail(path + "/threshold", "expected a positive integer");
    }
    sanction.threshold = t.get<int>();
  } else {
    fail(path + "/kind", "expected \"immediate\" or \"deferred\"");
  }
  sanction.pattern = parse_pattern(require(j, "pattern", path), path + "/pattern");
  std::string action = require_string(j, "action", path);
  if (action == "reject") {
    sanction.action = SanctionAction::Reject;
  } else if (action == "lock") {
    sanction.action = SanctionAction::Lock;
  } else {
    fail(path + "/action", "expected \"reject\" or \"lock\"");
  }
  return sanction;
}

// ---------------------------------------------------------------------------
// Report fragments

json json_of(const ConflictingClause& clause) {
  json j = {{"profile_id", clause.profile_id},
            {"reason", to_string(clause.reason)}};
  if (clause.available) j["available"] = json_of(*clause.available);
  return j;
}

json json_of(const SubmissionReport& report) {
  json conflicts = json::array();
  for (const ConflictingClause& clause : report.conflicts) {
    conflicts.push_back(json_of(clause));
  }
  return {{"contract_id", report.contract_id},
          {"accepted", report.accepted},
          {"conflicts", std::move(conflicts)}};
}

json json_of(const ViolationEvent& violation) {
  json j = {{"component", violation.component},
            {"descriptor", to_string(violation.descriptor)},
            {"kind", to_string(violation.kind)},
            {"amount", violation.amount},
            {"step", violation.step}};
  j["profile"] = violation.profile ? json(*violation.profile) : json(nullptr);
  j["access"] =
      violation.access ? json(to_string(*violation.access)) : json(nullptr);
  return j;
}

json json_of(const Warning& warning) {
  return {{"kind", to_string(warning.kind)},
          {"component", warning.component},
          {"pattern", warning.pattern},
          {"count", warning.count},
          {"threshold", warning.threshold},
          {"step", warning.step},
          {"message", warning.message}};
}

json json_of(const NegotiationRecord& record) {
  json j = {{"step", record.step},
            {"operation", record.operation},
            {"contract_id", record.contract_id},
            {"state_after", to_string(record.state_after)}};
  j["report"] = record.report ? json_of(*record.report) : json(nullptr);
  return j;
}

}  // namespace jamus
