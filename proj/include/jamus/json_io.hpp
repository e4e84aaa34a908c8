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

#include <string>

#include <nlohmann/json.hpp>

#include "jamus/amendment.hpp"
#include "jamus/broker.hpp"
#include "jamus/contract.hpp"
#include "jamus/negotiation.hpp"
#include "jamus/pattern.hpp"
#include "jamus/sanctions.hpp"
#include "jamus/violation.hpp"

// Parsing and rendering of the documented JSON schemas. Parsers throw
// SchemaError with a JSON-pointer-style path on any malformed input;
// renderers are total.

namespace jamus {

using nlohmann::json;

/// True when `v` is an integer >= 0, regardless of how the JSON library
/// typed it internally (parsed literals come back unsigned, values assigned
/// from C++ ints come back signed).
bool is_count(const json& v);

ResourcePattern parse_pattern(const json& j, const std::string& path);
AccessPermission parse_permission(const json& j, ResourceKind kind,
                                  const std::string& path);
Quota parse_quota(const json& j, ResourceKind kind, const std::string& path);
ResourceUtilisationProfile parse_profile(const json& j,
                                         const std::string& path);
Contract parse_contract(const json& j, const std::string& path);
Amendment parse_amendment(const json& j, const std::string& path);
PlatformCapacity parse_capacity(const json& j, const std::string& path);
Sanction parse_sanction(const json& j, const std::string& path);

json json_of(const ResourcePattern& pattern);
json json_of(const AccessPermission& permission);
json json_of(const Quota& quota);
json json_of(const ResourceUtilisationProfile& profile);
json json_of(const Contract& contract);
json json_of(const ConflictingClause& clause);
json json_of(const SubmissionReport& report);
json json_of(const CapacityEntry& entry);
json json_of(const PlatformCapacity& capacity);
json json_of(const ViolationEvent& violation);
json json_of(const Warning& warning);
json json_of(const NegotiationRecord& record);

/// Reads and parses a whole JSON document; IO problems and parse errors
/// surface as SchemaError on path "<file>".
json load_json_file(const std::string& file);

}  // namespace jamus
