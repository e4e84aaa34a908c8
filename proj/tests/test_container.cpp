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

#include <string>
#include <vector>

#include "jamus/amendment.hpp"
#include "jamus/container.hpp"
#include "jamus/contract.hpp"
#include "jamus/step.hpp"

using namespace jamus;

namespace {


ResourceUtilisationProfile file_profile(ProfileId id, std::string prefix,
                                        Bytes read, Bytes write) {
  return {std::move(id), file_pattern(std::move(prefix)),
          file_permission(true, true), file_quota(read, write),
          AvailabilityPolicy::BestEffort};
}

ResourceUtilisationProfile memory_profile(ProfileId id, Bytes bytes) {
  return {std::move(id), memory_pattern(), memory_permission(),
          memory_quota(bytes), AvailabilityPolicy::Reservation};
}

}  // namespace

TEST_CASE("single-profile open and write produce the ten supervision actions") {
  StepCounter steps;
  Container container("editor", {}, steps);
  container.configure({"c", {file_profile("rf", "~/notes", 1 * Mo, 1 * Mo)}});

  auto opened =
      container.resources().open_file("~/notes/today.txt", FilePermission::all());
  REQUIRE(opened.handle.has_value());
  REQUIRE(container.resources()
              .access(*opened.handle, AccessKind::Write, 1024)
              .allowed());

  std::vector<std::string> expected = {
      "tracker_registered\tregistry",
      "monitor_instantiated\trf\tfile:~/notes",
      "resource_created\th1:file:~/notes/today.txt",
      "registry_broadcast\th1:file:~/notes/today.txt",
      "tracker_notified\th1:file:~/notes/today.txt",
      "monitor_list_queried\t1",
      "monitor_selected\trf",
      "monitor_subscribed\trf\th1",
      "access\th1\twrite\t1024\tallow",
      "monitor_notified\trf\th1\twrite",
  };
  CHECK(container.action_log() == expected);

  SUBCASE("the run is reproducible action for action") {
    StepCounter steps2;
    Container again("editor", {}, steps2);
    again.configure({"c", {file_profile("rf", "~/notes", 1 * Mo, 1 * Mo)}});
    auto o2 = again.resources().open_file("~/notes/today.txt",
                                          FilePermission::all());
    REQUIRE(o2.handle.has_value());
    REQUIRE(again.resources().access(*o2.handle, AccessKind::Write, 1024).allowed());
    CHECK(again.action_log() == container.action_log());
  }
}

TEST_CASE("quota enforcement: 400 Ko then 200 Ko under a 500 Ko budget") {
  StepCounter steps;
  Container container("c", {}, steps);
  container.configure(
      {"c", {file_profile("r1", "~/.jmailer", 500 * Ko, 500 * Ko)}});

  auto opened = container.resources().open_file("~/.jmailer/out.txt",
                                                FilePermission::all());
  REQUIRE(opened.handle.has_value());

  CHECK(container.resources()
            .access(*opened.handle, AccessKind::Write, 400 * Ko)
            .allowed());
  AccessVerdict second =
      container.resources().access(*opened.handle, AccessKind::Write, 200 * Ko);
  CHECK(second == AccessVerdict::reject(DenyReason::Quota));

  // Exactly one violation; the denied write never reaches the ledger.
  REQUIRE(container.violations().size() == 1);
  CHECK(container.violations()[0].kind == ViolationKind::Quota);
  CHECK(container.violations()[0].profile == "r1");
  CHECK(container.violations()[0].amount == 200 * Ko);

  auto usage = container.usage_report();
  REQUIRE(usage.size() == 1);
  CHECK(usage[0].consumed == file_quota(0, 400 * Ko));
  CHECK(usage[0].violations == 1);
  CHECK(container.resources().file_size("~/.jmailer/out.txt") == 400 * Ko);

  SUBCASE("a smaller write still fits the remaining budget") {
    CHECK(container.resources()
              .access(*opened.handle, AccessKind::Write, 100 * Ko)
              .allowed());
    CHECK(container.usage_report()[0].consumed == file_quota(0, 500 * Ko));
  }
}

TEST_CASE("permission violations carry the permission reason") {
  StepCounter steps;
  Container container("c", {}, steps);
  ResourceUtilisationProfile read_only =
      file_profile("ro", "~/shared", 1 * Mo, 1 * Mo);
  read_only.permission = file_permission(true, false);
  container.configure({"c", {read_only}});

  auto opened =
      container.resources().open_file("~/shared/x", FilePermission::all());
  REQUIRE(opened.handle.has_value());
  CHECK(container.resources().access(*opened.handle, AccessKind::Read, 10).allowed());
  CHECK(container.resources().access(*opened.handle, AccessKind::Write, 10) ==
        AccessVerdict::reject(DenyReason::Permission));
  REQUIRE(container.violations().size() == 1);
  CHECK(container.violations()[0].kind == ViolationKind::Permission);
}

TEST_CASE("resources outside every profile are vetoed at creation") {
  StepCounter steps;
  Container container("c", {}, steps);
  container.configure({"c", {file_profile("rf", "~/mine", 1 * Mo, 1 * Mo)}});

  auto denied =
      container.resources().open_file("/etc/passwd", FilePermission::all());
  CHECK_FALSE(denied.handle.has_value());
  CHECK(denied.verdict == AccessVerdict::reject(DenyReason::NoProfile));
  REQUIRE(container.violations().size() == 1);
  CHECK_FALSE(container.violations()[0].profile.has_value());
  CHECK_FALSE(container.violations()[0].access.has_value());
}

TEST_CASE("routing picks the most specific covering profile") {
  StepCounter steps;
  Container container("c", {}, steps);
  container.configure({"c",
                       {file_profile("broad", "~", 10 * Mo, 10 * Mo),
                        file_profile("narrow", "~/hot", 1 * Mo, 1 * Mo)}});

  auto hot = container.resources().open_file("~/hot/x", FilePermission::all());
  auto cold = container.resources().open_file("~/cold/x", FilePermission::all());
  REQUIRE(hot.handle.has_value());
  REQUIRE(cold.handle.has_value());

  REQUIRE(container.resources().access(*hot.handle, AccessKind::Write, 100).allowed());
  REQUIRE(
      container.resources().access(*cold.handle, AccessKind::Write, 7).allowed());

  auto usage = container.usage_report();
  REQUIRE(usage.size() == 2);
  CHECK(usage[0].profile_id == "broad");
  CHECK(usage[0].consumed == file_quota(0, 7));
  CHECK(usage[1].profile_id == "narrow");
  CHECK(usage[1].consumed == file_quota(0, 100));
}

TEST_CASE("memory quota is instantaneous: frees make room") {
  StepCounter steps;
  Container container("c", {}, steps);
  container.configure({"c", {memory_profile("rm", 1 * Mo)}});

  CHECK(container.resources().allocate(512 * Ko).allowed());
  CHECK(container.resources().free_memory(512 * Ko).allowed());
  CHECK(container.resources().allocate(1 * Mo).allowed());
  CHECK(container.violations().empty());
  CHECK(container.usage_report()[0].consumed == memory_quota(1 * Mo));

  SUBCASE("one more byte over the cap violates") {
    CHECK(container.resources().allocate(1) ==
          AccessVerdict::reject(DenyReason::Quota));
    REQUIRE(container.violations().size() == 1);
    CHECK(container.usage_report()[0].consumed == memory_quota(1 * Mo));
  }
}

TEST_CASE("amendment continuity: kept profiles keep their ledgers") {
  StepCounter steps;
  Container container("c", {}, steps);
  Contract base{"c1",
                {file_profile("r1", "~/.jmailer", 500 * Ko, 500 * Ko),
                 memory_profile("r3", 1 * Mo)}};
  container.configure(base);

  auto opened = container.resources().open_file("~/.jmailer/out.txt",
                                                FilePermission::all());
  REQUIRE(opened.handle.has_value());
  REQUIRE(container.resources()
              .access(*opened.handle, AccessKind::Write, 300 * Ko)
              .allowed());

  Contract amended = apply_amendment(
      base,
      {"c1", {AmendmentClause::add(file_profile("r5", "/tmp", 2 * Mo, 2 * Mo))}});
  container.reconfigure(amended);

  auto usage = container.usage_report();
  REQUIRE(usage.size() == 3);
  CHECK(usage[0].profile_id == "r1");
  CHECK(usage[0].consumed == file_quota(0, 300 * Ko));  // ledger survived
  CHECK(usage[2].profile_id == "r5");
  CHECK(usage[2].consumed == file_quota(0, 0));

  SUBCASE("the old handle keeps charging its surviving monitor") {
    REQUIRE(container.resources()
                .access(*opened.handle, AccessKind::Write, 100 * Ko)
                .allowed());
    CHECK(container.usage_report()[0].consumed == file_quota(0, 400 * Ko));
  }

  SUBCASE("a new /tmp handle routes to the added profile") {
    auto spool =
        container.resources().open_file("/tmp/spool", FilePermission::all());
    REQUIRE(spool.handle.has_value());
    REQUIRE(container.resources()
                .access(*spool.handle, AccessKind::Write, 64)
                .allowed());
    CHECK(container.usage_report()[2].consumed == file_quota(0, 64));
  }

  SUBCASE("MODIFY keeps consumption against the new bound") {
    Contract tighter = apply_amendment(
        amended, {"c1", {AmendmentClause::modify(
                            "r1", file_profile("r1", "~/.jmailer", 500 * Ko,
                                               350 * Ko))}});
    container.reconfigure(tighter);
    CHECK(container.usage_report()[0].consumed == file_quota(0, 300 * Ko));
    // 300 Ko already written; 100 Ko more would cross the new 350 Ko bound.
    CHECK(container.resources().access(*opened.handle, AccessKind::Write,
                                       100 * Ko) ==
          AccessVerdict::reject(DenyReason::Quota));
    CHECK(container.resources()
              .access(*opened.handle, AccessKind::Write, 50 * Ko)
              .allowed());
  }

  SUBCASE("REMOVE orphans covered handles: next access has no profile") {
    Contract without = apply_amendment(
        amended, {"c1", {AmendmentClause::remove("r1")}});
    container.reconfigure(without);
    CHECK(container.resources().access(*opened.handle, AccessKind::Write, 1) ==
          AccessVerdict::reject(DenyReason::NoProfile));
  }
}

TEST_CASE("sanctions integrate with supervision") {
  StepCounter steps;

  SUBCASE("deferred sanction warns through the sink, then applies") {
    std::vector<Warning> inbox;
    Container container(
        "c", {{Sanction::Kind::Deferred, file_pattern("~"),
               SanctionAction::Reject, 2}},
        steps);
    container.set_warning_sink([&](const Warning& w) { inbox.push_back(w); });
    container.configure({"c", {file_profile("r1", "~", 100 * Ko, 100 * Ko)}});

    auto opened = container.resources().open_file("~/x", FilePermission::all());
    REQUIRE(opened.handle.has_value());

    CHECK(container.resources().access(*opened.handle, AccessKind::Write,
                                       200 * Ko) ==
          AccessVerdict::reject(DenyReason::Quota));
    REQUIRE(inbox.size() == 1);
    CHECK(inbox[0].kind == Warning::Kind::SanctionWarning);
    CHECK_FALSE(container.sanction_applied());

    CHECK(container.resources().access(*opened.handle, AccessKind::Write,
                                       200 * Ko) ==
          AccessVerdict::reject(DenyReason::Quota));
    CHECK(container.sanction_applied());
    CHECK(inbox.size() == 1);  // application itself sends no warning

    // Standing denial now guards even conformant accesses, by the sanction.
    CHECK(container.resources().access(*opened.handle, AccessKind::Write, 1) ==
          AccessVerdict::reject(DenyReason::Sanction));
    CHECK(container.violations().size() == 2);  // standing denials add none
  }

  SUBCASE("immediate LOCK freezes matching handles and vetoes new ones") {
    Container container(
        "c", {{Sanction::Kind::Immediate, socket_pattern("*", 80),
               SanctionAction::Lock, 1}},
        steps);
    container.configure(
        {"c",
         {{"s", socket_pattern("*", 80), socket_permission(true, false),
           socket_quota(600 * Ko, 600 * Ko), AvailabilityPolicy::BestEffort}}});

    auto sock = container.resources().open_socket("example.org", 80);
    REQUIRE(sock.handle.has_value());
    REQUIRE(container.resources()
                .access(*sock.handle, AccessKind::Send, 600 * Ko)
                .allowed());

    AccessVerdict over =
        container.resources().access(*sock.handle, AccessKind::Send, 1 * Ko);
    CHECK(over == AccessVerdict::lock(DenyReason::Quota));
    CHECK(container.sanction_applied());
    CHECK(container.resources().record(*sock.handle).state ==
          HandleState::Locked);

    CHECK(container.resources().access(*sock.handle, AccessKind::Send, 1) ==
          AccessVerdict::reject(DenyReason::HandleLocked));
    CHECK(container.violations().size() == 1);  // the locked bounce adds none

    auto again = container.resources().open_socket("example.org", 80);
    CHECK_FALSE(again.handle.has_value());
    CHECK(again.verdict == AccessVerdict::lock(DenyReason::Sanction));
  }
}

TEST_CASE("best-effort probe denies when the platform pool ran dry") {
  StepCounter steps;
  Container container("c", {}, steps);
  container.configure({"c", {file_profile("r1", "~", 1 * Mo, 1 * Mo)}});

  Bytes platform_left = 100 * Ko;
  container.set_capacity_probe(
      [&](const ResourcePattern&) -> std::optional<Quota> {
        return file_quota(platform_left, platform_left);
      });

  std::vector<Warning> inbox;
  container.set_warning_sink([&](const Warning& w) { inbox.push_back(w); });

  auto opened = container.resources().open_file("~/x", FilePermission::all());
  REQUIRE(opened.handle.has_value());

  CHECK(container.resources().access(*opened.handle, AccessKind::Write,
                                     200 * Ko) ==
        AccessVerdict::reject(DenyReason::BestEffort));
  REQUIRE(inbox.size() == 1);
  CHECK(inbox[0].kind == Warning::Kind::BestEffortDenial);
  CHECK(container.violations().empty());  // not the component's fault

  platform_left = 300 * Ko;
  CHECK(container.resources()
            .access(*opened.handle, AccessKind::Write, 200 * Ko)
            .allowed());
}
