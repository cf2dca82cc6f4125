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

#ifndef DSYN_RUN_CONFIG_H_
#define DSYN_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsyn/data_model.h"
#include "dsyn/eval.h"
#include "dsyn/kv_file.h"
#include "dsyn/params.h"
#include "dsyn/synth.h"

namespace dsyn {

// Pipeline configuration. Keys in the config file, DSYN_* environment
// variables and --set overrides use exactly these field names.
struct RunConfig {
  std::filesystem::path input_csv;
  std::filesystem::path model_file;  // empty: <output_dir>/model.kv
  std::filesystem::path output_dir = "out";

  double split_ds = 0.4;
  double split_dt = 0.3;
  double split_dp = 0.3;

  std::size_t k = 10;
  double gamma = 4.0;
  std::optional<double> omega;  // unset ("auto"): half the attributes
  double epsilon_s = kInfinity;
  double epsilon_p = kInfinity;
  double epsilon_0 = kInfinity;
  std::uint64_t rng_seed = 0;
  std::size_t max_candidates_per_release = 100;
  TestMode privacy_test = TestMode::kDeterministic;
  Adjacency adjacency = Adjacency::kAddRemove;
  std::optional<double> alpha;  // unset ("auto"): learned from DP

  std::size_t max_parents = 3;
  std::uint64_t complexity_cap = 256;
  std::size_t bins = 8;
  std::size_t max_categories = 32;

  std::size_t folds = 5;
  double learning_rate = 0.1;
  std::size_t epochs = 300;
  double l2 = 1e-4;
  std::size_t batch_size = 32;

  std::size_t workers = 0;  // 0: number of processors
  bool release_log = false;

  std::filesystem::path resolved_model_file() const;
  SplitFractions split_fractions() const {
    return {split_ds, split_dt, split_dp};
  }
  SynthesisConfig synthesis_config(std::size_t num_attributes) const;
  TrainOptions train_options(Loss loss) const;
};

// Sets one field from its text form. Throws Error(kInvalidArgument) whose
// message starts with the field name.
void set_config_field(RunConfig& config, const std::string& key,
                      const std::string& value);

const std::vector<std::string>& config_field_names();

// Layers, lowest precedence first: defaults, config file, DSYN_<FIELD>
// environment variables, explicit overrides.
RunConfig load_run_config(
    const std::optional<std::filesystem::path>& config_file,
    const std::map<std::string, std::string>& environment,
    const std::vector<std::pair<std::string, std::string>>& overrides);

// DSYN_* variables from the process environment, keyed by field name.
std::map<std::string, std::string> config_environment();

}  // namespace dsyn

#endif  // DSYN_RUN_CONFIG_H_
