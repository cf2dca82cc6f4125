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

#include "dsyn/model.h"

#include "dsyn/error.h"

namespace dsyn {

KeyValueFile model_document(const Model& model) {
  KeyValueFile doc;
  doc.set("format", std::string(kModelFormat));
  // The generator keeps each attribute independently with probability
  // 1 - omega / m rather than keeping exactly m - omega of them.
  doc.set("synth.keep_mask", "bernoulli");
  write_schema(model.schema, doc);
  doc.set_int("structure.max_parents",
              static_cast<std::int64_t>(model.max_parents));
  doc.set("structure.complexity_cap", std::to_string(model.complexity_cap));
  doc.set_double("structure.epsilon_s", model.epsilon_s);
  doc.set_int("structure.rows",
              static_cast<std::int64_t>(model.structure_rows));
  write_structure(model.structure, doc);
  doc.set_int("params.rows", static_cast<std::int64_t>(model.parameter_rows));
  write_cpts(model.cpts, doc);
  return doc;
}

Model model_from_document(const KeyValueFile& doc) {
  if (doc.get("format") != kModelFormat) {
    fail(ErrorCode::kStructural,
         "unsupported model format '" + doc.get("format") + "'");
  }
  if (doc.get("synth.keep_mask") != "bernoulli") {
    fail(ErrorCode::kStructural, "unsupported keep-mask scheme");
  }
  Model model;
  model.schema = read_schema(doc);
  const auto max_parents = doc.get_int("structure.max_parents");
  if (max_parents < 0) fail(ErrorCode::kStructural, "negative max_parents");
  model.max_parents = static_cast<std::size_t>(max_parents);
  const std::string& cap = doc.get("structure.complexity_cap");
  try {
    std::size_t used = 0;
    model.complexity_cap = std::stoull(cap, &used);
    if (used != cap.size()) throw std::invalid_argument(cap);
  } catch (const std::exception&) {
    fail(ErrorCode::kStructural,
         "key 'structure.complexity_cap': not an integer");
  }
  model.epsilon_s = doc.get_double("structure.epsilon_s");
  model.structure_rows =
      static_cast<std::size_t>(doc.get_int("structure.rows"));
  model.structure = read_structure(doc, model.schema.size());
  model.parameter_rows = static_cast<std::size_t>(doc.get_int("params.rows"));
  model.cpts = read_cpts(doc, model.structure, model.schema);
  return model;
}

void write_model(const Model& model, const std::filesystem::path& path) {
  model_document(model).write(path);
}

Model read_model(const std::filesystem::path& path) {
  return model_from_document(KeyValueFile::read(path));
}

}  // namespace dsyn
