// Copyright 2026 The dsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dsyn: learn a model, release synthetic records, evaluate them.
//
// Exit status: 0 success, 1 error, 2 usage error, 3 synthesis stopped on
// its attempt budget before releasing n records.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "dsyn/commands.h"
#include "dsyn/error.h"
#include "dsyn/run_config.h"

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitExhausted = 3;

void print_error(std::string_view code, std::string_view message) {
  std::cerr << "dsyn: error: " << code << ": " << message << '\n';
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    dsyn::fail(dsyn::ErrorCode::kInvalidArgument,
               "--set expects key=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seed-based synthetic data with a plausible deniability test"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::vector<std::string> assignments;
  app.add_option("-c,--config", config_path, "key = value configuration file");
  app.add_option("-s,--set", assignments,
                 "override a configuration field (key=value, repeatable)")
      ->take_all();

  auto* learn = app.add_subcommand("learn", "fit structure and parameters");
  std::size_t n = 0;
  auto* synthesize =
      app.add_subcommand("synthesize", "release up to n synthetic records");
  synthesize->add_option("-n,--n", n, "records to release")->required();
  std::string real_csv;
  std::string synth_csv;
  auto* evaluate = app.add_subcommand(
      "evaluate", "distinguishability and marginal fidelity");
  evaluate->add_option("--real", real_csv, "real records CSV")->required();
  evaluate->add_option("--synth", synth_csv, "synthetic records CSV")
      ->required();
  auto* report = app.add_subcommand("report", "summarize the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kExitUsage;
  }

  try {
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& a : assignments) overrides.push_back(split_assignment(a));
    std::optional<std::filesystem::path> file;
    if (!config_path.empty()) file = config_path;
    dsyn::RunConfig config = [&] {
      try {
        return dsyn::load_run_config(file, dsyn::config_environment(),
                                     overrides);
      } catch (const dsyn::Error& e) {
        throw dsyn::PhaseError("config", e);
      }
    }();

    if (*learn) {
      dsyn::cmd_learn(config, std::cerr);
    } else if (*synthesize) {
      const auto stats = dsyn::cmd_synthesize(config, n, std::cerr);
      if (stats.status == dsyn::RunStatus::kBudgetExhausted) {
        print_error("exhausted",
                    "released " + std::to_string(stats.releases) + " of " +
                        std::to_string(n) +
                        " records before the attempt budget ran out");
        return kExitExhausted;
      }
    } else if (*evaluate) {
      dsyn::cmd_evaluate(config, real_csv, synth_csv, std::cerr);
    } else if (*report) {
      dsyn::cmd_report(config, std::cout);
    }
  } catch (const dsyn::Error& e) {
    print_error(dsyn::error_code_name(e.code()), e.what());
    return kExitError;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kExitError;
  }
  return EXIT_SUCCESS;
}
