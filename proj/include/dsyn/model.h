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

#ifndef DSYN_MODEL_H_
#define DSYN_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "dsyn/data_model.h"
#include "dsyn/kv_file.h"
#include "dsyn/params.h"
#include "dsyn/structure.h"

namespace dsyn {

inline constexpr std::string_view kModelFormat = "dsyn-model/1";

// Everything the synthesizer needs: schema, DAG and CPTs, plus the knobs and
// budgets they were learned with.
struct Model {
  Schema schema;
  ParentSets structure;
  CptSet cpts;
  std::size_t max_parents = 0;
  std::uint64_t complexity_cap = 1;
  double epsilon_s = kInfinity;
  std::size_t structure_rows = 0;
  std::size_t parameter_rows = 0;

  std::size_t num_attributes() const { return schema.size(); }
  bool operator==(const Model&) const = default;
};

KeyValueFile model_document(const Model& model);
Model model_from_document(const KeyValueFile& doc);

void write_model(const Model& model, const std::filesystem::path& path);
Model read_model(const std::filesystem::path& path);

}  // namespace dsyn

#endif  // DSYN_MODEL_H_
