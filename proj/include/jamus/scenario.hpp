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

#include <nlohmann/json.hpp>

#include "jamus/amendment.hpp"
#include "jamus/broker.hpp"
#include "jamus/contract.hpp"
#include "jamus/sanctions.hpp"

namespace jamus {

/// One scripted action of a hosted component. Handle references are indices
/// into the component's creation steps (open_file/open_socket), in script
/// order, starting at 0.
struct ScriptStep {
  enum class Op {
    OpenFile,
    Read,
    Write,
    Close,
    OpenSocket,
    Send,
    Receive,
    Allocate,
    Free,
    Amend,
    Terminate,
  };

  Op op = Op::OpenFile;
  std::string path;                    // OpenFile
  FilePermission mode;                 // OpenFile
  std::string host;                    // OpenSocket
  std::uint16_t port = 0;              // OpenSocket
  int handle = -1;                     // Read/Write/Close/Send/Receive
  Bytes bytes = 0;                     // byte-moving ops
  std::optional<Amendment> amendment;  // Amend
};

std::string to_string(ScriptStep::Op op);

/// Scripted reaction to a warning. Handlers fire in declaration order, one
/// per received warning, as the component's next action.
struct WarningHandler {
  enum class Action { Amend, Terminate };

  Action action = Action::Terminate;
  std::optional<Amendment> amendment;
};

struct ComponentSpec {
  ComponentId id;
  std::vector<Contract> contracts;     // submitted in this order
  std::optional<ContractId> subscribe; // contract to subscribe, if any
  std::vector<ScriptStep> script;      // runs only once subscribed
  std::vector<WarningHandler> on_warning;
};

struct Scenario {
  int schema_version = 1;
  PlatformCapacity capacity;
  std::vector<Sanction> sanctions;
  std::vector<ComponentSpec> components;
};

/// Parses a scenario document. Throws SchemaError on malformed JSON shapes.
Scenario parse_scenario(const nlohmann::json& j);

/// Loads and parses, then validates. Throws SchemaError or ScenarioError.
Scenario load_scenario_file(const std::string& file);

/// Cross-reference checks on a parsed scenario: contracts valid and globally
/// unique, subscribe targets defined, handle references in range and of the
/// right resource kind, amendments addressed to the subscribed contract.
/// Throws ScenarioError on the first problem found.
void validate_scenario(const Scenario& scenario);

}  // namespace jamus
