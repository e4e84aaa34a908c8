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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jamus/errors.hpp"
#include "jamus/host.hpp"
#include "jamus/json_io.hpp"
#include "jamus/scenario.hpp"
#include "jamus/trace.hpp"
#include "jamus/verify.hpp"

namespace {

// Exit codes shared by the subcommands. `run` uses kSanction instead of
// kRejected; schema and scenario validation problems always map to kSchema.
constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kSchema = 2;

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return static_cast<bool>(out);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw jamus::SchemaError(path, "cannot read file");
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return content;
}

int cmd_run(const std::string& scenario_file,
            const std::optional<std::string>& trace_file,
            const std::optional<std::string>& report_file,
            std::optional<std::uint64_t> seed) {
  jamus::Scenario scenario = jamus::load_scenario_file(scenario_file);
  jamus::RunOptions options;
  options.seed = seed;
  jamus::RunResult result = jamus::run_scenario(scenario, options);
  if (trace_file && !write_file(*trace_file, result.trace_text)) {
    std::cerr << "error: cannot write " << *trace_file << "\n";
    return kSchema;
  }
  std::string report = result.report.dump(2) + "\n";
  if (report_file) {
    if (!write_file(*report_file, report)) {
      std::cerr << "error: cannot write " << *report_file << "\n";
      return kSchema;
    }
  } else {
    std::cout << report;
  }
  return result.exit_code;
}

int cmd_check(const std::string& contract_file,
              const std::string& capacity_file) {
  jamus::Contract contract =
      jamus::parse_contract(jamus::load_json_file(contract_file), "");
  auto errors = jamus::validate_contract(contract);
  if (!errors.empty()) {
    throw jamus::SchemaError("/profiles", to_string(errors.front().code));
  }
  jamus::PlatformCapacity capacity =
      jamus::parse_capacity(jamus::load_json_file(capacity_file), "");
  jamus::EvaluationResult result =
      jamus::evaluate_contract(capacity, contract);
  std::cout << jamus::json_of(result.report).dump(2) << "\n";
  return result.report.accepted ? kOk : kRejected;
}

int cmd_verify(const std::string& trace_file, const std::string& scenario_file,
               std::optional<std::uint64_t> seed) {
  jamus::Scenario scenario = jamus::load_scenario_file(scenario_file);
  std::string trace = read_file(trace_file);
  auto discrepancies = jamus::verify_trace(trace, scenario, seed);
  if (discrepancies.empty()) {
    std::cout << "trace matches scenario\n";
    return kOk;
  }
  for (const jamus::Discrepancy& d : discrepancies) {
    if (d.line > 0) std::cout << "line " << d.line << ": ";
    std::cout << d.message << "\n";
  }
  return kRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jamus resource-contract host"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string contract_file;
  std::string capacity_file;
  std::string trace_file;
  std::optional<std::string> trace_out;
  std::optional<std::string> report_out;
  std::optional<std::uint64_t> seed;

  CLI::App* run = app.add_subcommand("run", "execute a scenario");
  run->add_option("scenario", scenario_file, "scenario JSON file")->required();
  run->add_option("--trace", trace_out, "write the event trace to this file");
  run->add_option("--report", report_out,
                  "write the run report here instead of stdout");
  run->add_option("--seed", seed, "seeded random interleaving");

  CLI::App* check = app.add_subcommand(
      "check", "admission-check a contract against a capacity file");
  check->add_option("contract", contract_file, "contract JSON file")
      ->required();
  check->add_option("capacity", capacity_file, "capacity JSON file")
      ->required();

  CLI::App* verify =
      app.add_subcommand("verify", "validate a trace against its scenario");
  verify->add_option("trace", trace_file, "trace file")->required();
  verify->add_option("scenario", scenario_file, "scenario JSON file")
      ->required();
  verify->add_option("--seed", seed,
                     "seed the traced run was produced with, if any");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_file, trace_out, report_out, seed);
    if (check->parsed()) return cmd_check(contract_file, capacity_file);
    if (verify->parsed()) return cmd_verify(trace_file, scenario_file, seed);
  } catch (const jamus::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchema;
  } catch (const jamus::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchema;
  }
  return kSchema;
}
