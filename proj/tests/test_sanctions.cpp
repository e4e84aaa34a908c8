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

#include <doctest.h>

#include "jamus/sanctions.hpp"

using namespace jamus;

namespace {

ViolationEvent violation_on(ResourceDescriptor descriptor,
                            std::uint64_t step = 1) {
  ViolationEvent v;
  v.component = "c";
  v.profile = "r1";
  v.descriptor = std::move(descriptor);
  v.access = AccessKind::Write;
  v.amount = 1024;
  v.kind = ViolationKind::Quota;
  v.step = step;
  return v;
}

Sanction deferred_reject(ResourcePattern pattern, int threshold) {
  return {Sanction::Kind::Deferred, std::move(pattern), SanctionAction::Reject,
          threshold};
}

Sanction immediate(ResourcePattern pattern, SanctionAction action) {
  return {Sanction::Kind::Immediate, std::move(pattern), action, 1};
}

}  // namespace

TEST_CASE("deferred sanction: warn below threshold, apply at it") {
  SanctionEngine engine("c", {deferred_reject(file_pattern("~"), 2)});
  ResourceDescriptor target = file_descriptor("~/out.txt");

  auto first = engine.on_violation(violation_on(target, 10), DenyReason::Quota);
  CHECK(first.verdict == AccessVerdict::reject(DenyReason::Quota));
  CHECK_FALSE(first.sanction_applied);
  REQUIRE(first.warning.has_value());
  CHECK(first.warning->kind == Warning::Kind::SanctionWarning);
  CHECK(first.warning->count == 1);
  CHECK(first.warning->threshold == 2);
  CHECK(first.warning->message ==
        "consecutive violation 1/2 on file:~; sanction reject applies at 2");
  CHECK(engine.standing_verdict(target) == std::nullopt);
  CHECK_FALSE(engine.any_applied());

  auto second = engine.on_violation(violation_on(target, 11), DenyReason::Quota);
  CHECK(second.verdict == AccessVerdict::reject(DenyReason::Quota));
  CHECK(second.sanction_applied);
  CHECK_FALSE(second.warning.has_value());
  CHECK(engine.any_applied());
  CHECK(engine.status()[0].applied_step == 11);
  CHECK(engine.status()[0].warnings_issued == 1);

  SUBCASE("once applied, the sanction stands against conformant use too") {
    auto standing = engine.standing_verdict(target);
    REQUIRE(standing.has_value());
    CHECK(*standing == AccessVerdict::reject(DenyReason::Sanction));
    // Resources outside the pattern are unaffected.
    CHECK(engine.standing_verdict(file_descriptor("/tmp/x")) == std::nullopt);
  }

  SUBCASE("conformant access no longer resets an applied sanction") {
    engine.on_conformant_access(target);
    CHECK(engine.any_applied());
    CHECK(engine.standing_verdict(target).has_value());
  }
}

TEST_CASE("deferred sanction: a conformant access resets the count") {
  SanctionEngine engine("c", {deferred_reject(file_pattern("~"), 2)});
  ResourceDescriptor target = file_descriptor("~/out.txt");

  auto first = engine.on_violation(violation_on(target), DenyReason::Quota);
  REQUIRE(first.warning.has_value());
  CHECK(engine.status()[0].consecutive == 1);

  engine.on_conformant_access(file_descriptor("~/other.txt"));
  CHECK(engine.status()[0].consecutive == 0);

  // The streak restarts: this violation warns again instead of applying.
  auto third = engine.on_violation(violation_on(target), DenyReason::Quota);
  REQUIRE(third.warning.has_value());
  CHECK(third.warning->count == 1);
  CHECK_FALSE(third.sanction_applied);
  CHECK_FALSE(engine.any_applied());

  SUBCASE("a conformant access elsewhere does not reset the streak") {
    engine.on_conformant_access(file_descriptor("/tmp/unrelated"));
    CHECK(engine.status()[0].consecutive == 1);
  }
}

TEST_CASE("immediate REJECT fires every time but never becomes standing") {
  SanctionEngine engine("c",
                        {immediate(file_pattern("~"), SanctionAction::Reject)});
  ResourceDescriptor target = file_descriptor("~/x");

  for (int i = 0; i < 3; ++i) {
    auto outcome = engine.on_violation(violation_on(target), DenyReason::Quota);
    CHECK(outcome.verdict == AccessVerdict::reject(DenyReason::Quota));
    CHECK_FALSE(outcome.warning.has_value());
    CHECK_FALSE(outcome.sanction_applied);
  }
  CHECK(engine.status()[0].fired == 3);
  CHECK_FALSE(engine.any_applied());
  CHECK(engine.standing_verdict(target) == std::nullopt);
}

TEST_CASE("immediate LOCK applies on the first violation") {
  SanctionEngine engine("c",
                        {immediate(socket_pattern("*", 80), SanctionAction::Lock)});
  ResourceDescriptor sock = socket_descriptor("example.org", 80);

  ViolationEvent v = violation_on(sock, 7);
  v.access = AccessKind::Send;
  auto outcome = engine.on_violation(v, DenyReason::Quota);
  // The verdict keeps the violation's own reason; the lock is the escalation.
  CHECK(outcome.verdict == AccessVerdict::lock(DenyReason::Quota));
  REQUIRE(outcome.lock_pattern.has_value());
  CHECK(*outcome.lock_pattern == socket_pattern("*", 80));
  CHECK(outcome.sanction_applied);
  CHECK(engine.status()[0].applied_step == 7);

  SUBCASE("standing verdicts carry the sanction reason, lock preferred") {
    auto standing = engine.standing_verdict(socket_descriptor("other.net", 80));
    REQUIRE(standing.has_value());
    CHECK(*standing == AccessVerdict::lock(DenyReason::Sanction));
    CHECK(engine.standing_verdict(socket_descriptor("x", 443)) == std::nullopt);
  }
}

TEST_CASE("sanction selection: most specific wins, ties keep config order") {
  SanctionEngine engine(
      "c", {deferred_reject(file_pattern("~"), 9),
            immediate(file_pattern("~/hot"), SanctionAction::Reject),
            deferred_reject(file_pattern("~/also"), 9),
            deferred_reject(file_pattern("~/also"), 3)});

  SUBCASE("the deeper pattern takes the violation") {
    auto outcome = engine.on_violation(violation_on(file_descriptor("~/hot/x")),
                                       DenyReason::Quota);
    CHECK_FALSE(outcome.warning.has_value());  // immediate fired, no warning
    CHECK(engine.status()[1].fired == 1);
    CHECK(engine.status()[0].consecutive == 0);
  }

  SUBCASE("equal specificity goes to the earliest configured") {
    (void)engine.on_violation(violation_on(file_descriptor("~/also/x")),
                              DenyReason::Quota);
    CHECK(engine.status()[2].consecutive == 1);
    CHECK(engine.status()[3].consecutive == 0);
  }

  SUBCASE("unmatched violations pass through with the base reason") {
    auto outcome = engine.on_violation(violation_on(memory_descriptor("c")),
                                       DenyReason::Quota);
    CHECK(outcome.verdict == AccessVerdict::reject(DenyReason::Quota));
    CHECK_FALSE(outcome.warning.has_value());
    CHECK_FALSE(outcome.sanction_applied);
  }
}

TEST_CASE("deferred LOCK: threshold-th violation locks and applies") {
  SanctionEngine engine("c", {Sanction{Sanction::Kind::Deferred,
                                       memory_pattern(), SanctionAction::Lock,
                                       3}});
  ResourceDescriptor pool = memory_descriptor("c");

  auto first = engine.on_violation(violation_on(pool), DenyReason::Quota);
  auto second = engine.on_violation(violation_on(pool), DenyReason::Quota);
  CHECK(first.warning.has_value());
  CHECK(second.warning.has_value());
  CHECK(second.warning->count == 2);

  auto third = engine.on_violation(violation_on(pool), DenyReason::Quota);
  CHECK(third.verdict == AccessVerdict::lock(DenyReason::Quota));
  CHECK(third.sanction_applied);
  REQUIRE(third.lock_pattern.has_value());
  CHECK(engine.status()[0].warnings_issued == 2);
  auto standing = engine.standing_verdict(pool);
  REQUIRE(standing.has_value());
  CHECK(*standing == AccessVerdict::lock(DenyReason::Sanction));
}
