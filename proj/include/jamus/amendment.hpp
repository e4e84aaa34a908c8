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

#include <optional>
#include <stdexcept>
#include <vector>

#include "jamus/contract.hpp"

namespace jamus {

struct AmendmentClause {
  enum class Op { Add, Remove, Modify };

  Op op = Op::Add;
  /// Payload for Add and Modify. Modify keeps the target's id and takes the
  /// payload's pattern, permission, quota and policy.
  std::optional<ResourceUtilisationProfile> profile;
  /// Required for Remove and Modify, absent for Add.
  std::optional<ProfileId> target_profile_id;

  static AmendmentClause add(ResourceUtilisationProfile p) {
    return {Op::Add, std::move(p), std::nullopt};
  }
  static AmendmentClause remove(ProfileId target) {
    return {Op::Remove, std::nullopt, std::move(target)};
  }
  static AmendmentClause modify(ProfileId target,
                                ResourceUtilisationProfile payload) {
    return {Op::Modify, std::move(payload), std::move(target)};
  }

  bool operator==(const AmendmentClause&) const = default;
};

std::string to_string(AmendmentClause::Op op);

struct Amendment {
  ContractId contract_id;
  std::vector<AmendmentClause> clauses;

  bool operator==(const Amendment&) const = default;
};

class AmendmentError : public std::runtime_error {
 public:
  enum class Code {
    ContractIdMismatch,
    UnknownTargetProfile,
    DuplicateProfileId,
    MalformedClause,
  };

  AmendmentError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

/// Applies the clauses strictly in list order and returns the amended
/// contract; the input contract is never mutated. Targets are resolved
/// against the partially amended contract, so REMOVE x followed by ADD x is
/// legal within one amendment. Throws AmendmentError.
Contract apply_amendment(const Contract& contract, const Amendment& amendment);

}  // namespace jamus
