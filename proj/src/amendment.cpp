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

#include "jamus/amendment.hpp"

#include <algorithm>

namespace jamus {

std::string to_string(AmendmentClause::Op op) {
  switch (op) {
    case AmendmentClause::Op::Add: return "add";
    case AmendmentClause::Op::Remove: return "remove";
    case AmendmentClause::Op::Modify: return "modify";
  }
  return "?";
}

namespace {

using Code = AmendmentError::Code;

auto find_by_id(std::vector<ResourceUtilisationProfile>& profiles,
                const ProfileId& id) {
  return std::find_if(profiles.begin(), profiles.end(),
                      [&](const auto& p) { return p.id == id; });
}

}  // namespace

Contract apply_amendment(const Contract& contract,
                         const Amendment& amendment) {
  if (amendment.contract_id != contract.id) {
    throw AmendmentError(Code::ContractIdMismatch,
                         "amendment targets contract '" +
                             amendment.contract_id + "', not '" + contract.id +
                             "'");
  }
  if (amendment.clauses.empty()) {
    throw AmendmentError(Code::MalformedClause, "amendment has no clauses");
  }

  Contract amended = contract;
  for (const auto& clause : amendment.clauses) {
    switch (clause.op) {
      case AmendmentClause::Op::Add: {
        if (!clause.profile || clause.target_profile_id) {
          throw AmendmentError(Code::MalformedClause,
                               "ADD carries a profile and no target");
        }
        if (find_by_id(amended.profiles, clause.profile->id) !=
            amended.profiles.end()) {
          throw AmendmentError(
              Code::DuplicateProfileId,
              "profile '" + clause.profile->id + "' already present");
        }
        amended.profiles.push_back(*clause.profile);
        break;
      }
      case AmendmentClause::Op::Remove: {
        if (clause.profile || !clause.target_profile_id) {
          throw AmendmentError(Code::MalformedClause,
                               "REMOVE carries a target and no profile");
        }
        auto it = find_by_id(amended.profiles, *clause.target_profile_id);
        if (it == amended.profiles.end()) {
          throw AmendmentError(
              Code::UnknownTargetProfile,
              "no profile '" + *clause.target_profile_id + "' to remove");
        }
        amended.profiles.erase(it);
        break;
      }
      case AmendmentClause::Op::Modify: {
        if (!clause.profile || !clause.target_profile_id) {
          throw AmendmentError(Code::MalformedClause,
                               "MODIFY carries both a target and a profile");
        }
        auto it = find_by_id(amended.profiles, *clause.target_profile_id);
        if (it == amended.profiles.end()) {
          throw AmendmentError(
              Code::UnknownTargetProfile,
              "no profile '" + *clause.target_profile_id + "' to modify");
        }
        it->pattern = clause.profile->pattern;
        it->permission = clause.profile->permission;
        it->quota = clause.profile->quota;
        it->policy = clause.profile->policy;
        break;
      }
    }
  }
  return amended;
}

}  // namespace jamus
