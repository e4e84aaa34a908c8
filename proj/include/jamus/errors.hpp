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

#include <stdexcept>
#include <string>

namespace jamus {

/// Misuse of the negotiation or supervision protocol: duplicate submissions,
/// subscribing contracts that were never accepted, releasing twice, and the
/// like. These indicate a caller bug or a broken scenario, not a contract
/// violation by a hosted component.
class ProtocolError : public std::runtime_error {
 public:
  enum class Code {
    DuplicateContractId,
    UnknownContract,
    NotAccepted,
    AlreadySubscribedComponent,
    AlreadySubscribed,
    AlreadyReleased,
    NotSubscribed,
    NoSubscribedContract,
    AlreadyConfigured,
    NotConfigured,
  };

  ProtocolError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

/// A scenario or configuration file that does not match the documented
/// schema. Carries a JSON-pointer-style path to the offending element.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A well-formed scenario with dangling internal references (unknown handle
/// slots, contract ids, and so on).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jamus
