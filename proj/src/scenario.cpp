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

#include "jamus/scenario.hpp"

#include <set>

#include "jamus/errors.hpp"
#include "jamus/json_io.hpp"

namespace jamus {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw SchemaError(path, message);
}

ScriptStep parse_step(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto opit = j.find("op");
  if (opit == j.end() || !opit->is_string()) {
    fail(path, "missing string field 'op'");
  }
  std::string op = opit->get<std::string>();

  auto get_handle = [&]() -> int {
    auto it = j.find("handle");
    if (it == j.end() || !is_count(*it)) {
      fail(path + "/handle", "expected a non-negative handle index");
    }
    return it->get<int>();
  };
  auto get_bytes = [&]() -> Bytes {
    auto it = j.find("bytes");
    if (it == j.end() || !is_count(*it)) {
      fail(path + "/bytes", "expected a non-negative byte count");
    }
    return it->get<Bytes>();
  };

  ScriptStep step;
  if (op == "open_file") {
    step.op = ScriptStep::Op::OpenFile;
    auto pit = j.find("path");
    if (pit == j.end() || !pit->is_string()) {
      fail(path + "/path", "expected a string path");
    }
    step.path = pit->get<std::string>();
    auto mit = j.find("mode");
    if (mit == j.end() || !mit->is_object()) {
      fail(path + "/mode", "expected an object {read, write}");
    }
    AccessPermission mode =
        parse_permission(*mit, ResourceKind::File, path + "/mode");
    step.mode = mode.file();
    if (!step.mode.read && !step.mode.write) {
      fail(path + "/mode", "open mode needs read or write");
    }
  } else if (op == "read" || op == "write" || op == "send" || op == "receive") {
    step.op = op == "read"    ? ScriptStep::Op::Read
              : op == "write" ? ScriptStep::Op::Write
              : op == "send"  ? ScriptStep::Op::Send
                              : ScriptStep::Op::Receive;
    step.handle = get_handle();
    step.bytes = get_bytes();
  } else if (op == "close") {
    step.op = ScriptStep::Op::Close;
    step.handle = get_handle();
  } else if (op == "open_socket") {
    step.op = ScriptStep::Op::OpenSocket;
    auto hit = j.find("host");
    if (hit == j.end() || !hit->is_string() ||
        hit->get<std::string>().empty()) {
      fail(path + "/host", "expected a non-empty host string");
    }
    step.host = hit->get<std::string>();
    auto pit = j.find("port");
    if (pit == j.end() || !is_count(*pit) ||
        pit->get<std::uint64_t>() < 1 || pit->get<std::uint64_t>() > 65535) {
      fail(path + "/port", "expected a port in 1..65535");
    }
    step.port = static_cast<std::uint16_t>(pit->get<std::uint64_t>());
  } else if (op == "allocate" || op == "free") {
    step.op = op == "allocate" ? ScriptStep::Op::Allocate : ScriptStep::Op::Free;
    step.bytes = get_bytes();
    if (step.bytes == 0) fail(path + "/bytes", "expected a positive byte count");
  } else if (op == "amend") {
    step.op = ScriptStep::Op::Amend;
    auto ait = j.find("amendment");
    if (ait == j.end()) fail(path, "missing field 'amendment'");
    step.amendment = parse_amendment(*ait, path + "/amendment");
  } else if (op == "terminate") {
    step.op = ScriptStep::Op::Terminate;
  } else {
    fail(path + "/op", "unknown op '" + op + "'");
  }
  return step;
}

WarningHandler parse_handler(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto ait = j.find("action");
  if (ait == j.end() || !ait->is_string()) {
    fail(path, "missing string field 'action'");
  }
  WarningHandler handler;
  std::string action = ait->get<std::string>();
  if (action == "amend") {
    handler.action = WarningHandler::Action::Amend;
    auto mit = j.find("amendment");
    if (mit == j.end()) fail(path, "missing field 'amendment'");
    handler.amendment = parse_amendment(*mit, path + "/amendment");
  } else if (action == "terminate") {
    handler.action = WarningHandler::Action::Terminate;
  } else {
    fail(path + "/action", "expected \"amend\" or \"terminate\"");
  }
  return handler;
}

ComponentSpec parse_component(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  ComponentSpec spec;
  auto idit = j.find("id");
  if (idit == j.end() || !idit->is_string() ||
      idit->get<std::string>().empty()) {
    fail(path + "/id", "expected a non-empty component id");
  }
  spec.id = idit->get<std::string>();

  auto cit = j.find("contracts");
  if (cit == j.end() || !cit->is_array()) {
    fail(path + "/contracts", "expected an array");
  }
  for (std::size_t i = 0; i < cit->size(); ++i) {
    spec.contracts.push_back(
        parse_contract((*cit)[i], path + "/contracts/" + std::to_string(i)));
  }

  auto sit = j.find("subscribe");
  if (sit != j.end() && !sit->is_null()) {
    if (!sit->is_string()) fail(path + "/subscribe", "expected a contract id");
    spec.subscribe = sit->get<std::string>();
  }

  auto scit = j.find("script");
  if (scit != j.end()) {
    if (!scit->is_array()) fail(path + "/script", "expected an array");
    for (std::size_t i = 0; i < scit->size(); ++i) {
      spec.script.push_back(
          parse_step((*scit)[i], path + "/script/" + std::to_string(i)));
    }
  }

  auto wit = j.find("on_warning");
  if (wit != j.end()) {
    if (!wit->is_array()) fail(path + "/on_warning", "expected an array");
    for (std::size_t i = 0; i < wit->size(); ++i) {
      spec.on_warning.push_back(
          parse_handler((*wit)[i], path + "/on_warning/" + std::to_string(i)));
    }
  }
  return spec;
}

}  // namespace

std::string to_string(ScriptStep::Op op) {
  switch (op) {
    case ScriptStep::Op::OpenFile: return "open_file";
    case ScriptStep::Op::Read: return "read";
    case ScriptStep::Op::Write: return "write";
    case ScriptStep::Op::Close: return "close";
    case ScriptStep::Op::OpenSocket: return "open_socket";
    case ScriptStep::Op::Send: return "send";
    case ScriptStep::Op::Receive: return "receive";
    case ScriptStep::Op::Allocate: return "allocate";
    case ScriptStep::Op::Free: return "free";
    case ScriptStep::Op::Amend: return "amend";
    case ScriptStep::Op::Terminate: return "terminate";
  }
  return "?";
}

Scenario parse_scenario(const nlohmann::json& j) {
  if (!j.is_object()) fail("/", "expected an object");
  auto vit = j.find("schema_version");
  if (vit == j.end() || !is_count(*vit) ||
      vit->get<std::uint64_t>() != 1) {
    fail("/schema_version", "expected schema_version 1");
  }
  Scenario scenario;
  scenario.schema_version = 1;

  auto cit = j.find("capacity");
  if (cit == j.end()) fail("/", "missing field 'capacity'");
  scenario.capacity = parse_capacity(*cit, "/capacity");

  auto sit = j.find("sanctions");
  if (sit != j.end()) {
    if (!sit->is_array()) fail("/sanctions", "expected an array");
    for (std::size_t i = 0; i < sit->size(); ++i) {
      scenario.sanctions.push_back(
          parse_sanction((*sit)[i], "/sanctions/" + std::to_string(i)));
    }
  }

  auto mit = j.find("components");
  if (mit == j.end() || !mit->is_array()) {
    fail("/components", "expected an array");
  }
  for (std::size_t i = 0; i < mit->size(); ++i) {
    scenario.components.push_back(
        parse_component((*mit)[i], "/components/" + std::to_string(i)));
  }
  return scenario;
}

void validate_scenario(const Scenario& scenario) {
  std::set<ComponentId> component_ids;
  std::set<ContractId> contract_ids;  // global: the broker ledgers by id

  for (const ComponentSpec& spec : scenario.components) {
    if (!component_ids.insert(spec.id).second) {
      throw ScenarioError("duplicate component id: " + spec.id);
    }
    for (const Contract& contract : spec.contracts) {
      if (!contract_ids.insert(contract.id).second) {
        throw ScenarioError("duplicate contract id: " + contract.id);
      }
      auto errors = validate_contract(contract);
      if (!errors.empty()) {
        throw ScenarioError("invalid contract " + contract.id + ": " +
                            to_string(errors.front().code) +
                            (errors.front().detail.empty()
                                 ? ""
                                 : " (" + errors.front().detail + ")"));
      }
    }
    if (spec.subscribe) {
      bool found = false;
      for (const Contract& contract : spec.contracts) {
        if (contract.id == *spec.subscribe) {
          found = true;
          break;
        }
      }
      if (!found) {
        throw ScenarioError("component " + spec.id +
                            " subscribes unknown contract: " + *spec.subscribe);
      }
    }
    if (!spec.script.empty() && !spec.subscribe) {
      throw ScenarioError("component " + spec.id +
                          " has a script but subscribes no contract");
    }

    // Handle references: index into creation steps seen so far, kind-matched.
    std::vector<ScriptStep::Op> creations;
    for (std::size_t i = 0; i < spec.script.size(); ++i) {
      const ScriptStep& step = spec.script[i];
      auto require_ref = [&](bool file_ok, bool socket_ok) {
        if (step.handle < 0 ||
            static_cast<std::size_t>(step.handle) >= creations.size()) {
          throw ScenarioError("component " + spec.id + " script step " +
                              std::to_string(i) +
                              " references handle out of range");
        }
        ScriptStep::Op creator = creations[static_cast<std::size_t>(step.handle)];
        bool is_file = creator == ScriptStep::Op::OpenFile;
        if ((is_file && !file_ok) || (!is_file && !socket_ok)) {
          throw ScenarioError("component " + spec.id + " script step " +
                              std::to_string(i) +
                              " uses a handle of the wrong kind");
        }
      };
      switch (step.op) {
        case ScriptStep::Op::OpenFile:
        case ScriptStep::Op::OpenSocket:
          creations.push_back(step.op);
          break;
        case ScriptStep::Op::Read:
        case ScriptStep::Op::Write:
          require_ref(true, false);
          break;
        case ScriptStep::Op::Send:
        case ScriptStep::Op::Receive:
          require_ref(false, true);
          break;
        case ScriptStep::Op::Close:
          require_ref(true, true);
          break;
        case ScriptStep::Op::Amend:
          if (!spec.subscribe ||
              step.amendment->contract_id != *spec.subscribe) {
            throw ScenarioError(
                "component " + spec.id + " script step " + std::to_string(i) +
                " amends a contract it does not subscribe");
          }
          break;
        case ScriptStep::Op::Allocate:
        case ScriptStep::Op::Free:
        case ScriptStep::Op::Terminate:
          break;
      }
    }
    for (std::size_t i = 0; i < spec.on_warning.size(); ++i) {
      const WarningHandler& handler = spec.on_warning[i];
      if (handler.action == WarningHandler::Action::Amend &&
          (!spec.subscribe ||
           handler.amendment->contract_id != *spec.subscribe)) {
        throw ScenarioError("component " + spec.id + " warning handler " +
                            std::to_string(i) +
                            " amends a contract it does not subscribe");
      }
    }
  }
}

Scenario load_scenario_file(const std::string& file) {
  Scenario scenario = parse_scenario(load_json_file(file));
  validate_scenario(scenario);
  return scenario;
}

}  // namespace jamus
