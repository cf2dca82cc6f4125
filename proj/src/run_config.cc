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

#include "dsyn/run_config.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

#include "dsyn/error.h"

namespace dsyn {
namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;

[[noreturn]] void bad_field(const std::string& key, const std::string& what) {
  fail(ErrorCode::kInvalidArgument, key + ": " + what);
}

double real_field(const std::string& key, const std::string& text) {
  auto v = parse_double(text);
  if (!v || std::isnan(*v))
    bad_field(key, "expected a number, got '" + text + "'");
  return *v;
}

std::int64_t int_field(const std::string& key, const std::string& text) {
  auto v = parse_int(text);
  if (!v) bad_field(key, "expected an integer, got '" + text + "'");
  return *v;
}

std::size_t count_field(const std::string& key, const std::string& text,
                        std::int64_t minimum) {
  const auto v = int_field(key, text);
  if (v < minimum) {
    bad_field(key,
              "must be at least " + std::to_string(minimum) + ", got " + text);
  }
  return static_cast<std::size_t>(v);
}

double fraction_field(const std::string& key, const std::string& text) {
  const double v = real_field(key, text);
  if (v < 0 || v > 1) bad_field(key, "must lie in [0, 1], got " + text);
  return v;
}

double positive_field(const std::string& key, const std::string& text) {
  const double v = real_field(key, text);
  if (!(v > 0)) bad_field(key, "must be positive, got " + text);
  return v;
}

bool bool_field(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  bad_field(key, "expected true or false, got '" + text + "'");
}

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const auto* table = new std::vector<std::pair<std::string, Setter>>{
      {"input_csv",
       [](RunConfig& c, const std::string& v) { c.input_csv = v; }},
      {"model_file",
       [](RunConfig& c, const std::string& v) { c.model_file = v; }},
      {"output_dir",
       [](RunConfig& c, const std::string& v) {
         if (v.empty()) bad_field("output_dir", "must not be empty");
         c.output_dir = v;
       }},
      {"split_ds",
       [](RunConfig& c, const std::string& v) {
         c.split_ds = fraction_field("split_ds", v);
       }},
      {"split_dt",
       [](RunConfig& c, const std::string& v) {
         c.split_dt = fraction_field("split_dt", v);
       }},
      {"split_dp",
       [](RunConfig& c, const std::string& v) {
         c.split_dp = fraction_field("split_dp", v);
       }},
      {"k", [](RunConfig& c,
               const std::string& v) { c.k = count_field("k", v, 1); }},
      {"gamma",
       [](RunConfig& c, const std::string& v) {
         c.gamma = real_field("gamma", v);
         if (c.gamma < 1) bad_field("gamma", "must be at least 1, got " + v);
       }},
      {"omega",
       [](RunConfig& c, const std::string& v) {
         if (v == "auto") {
           c.omega.reset();
           return;
         }
         const double omega = real_field("omega", v);
         if (omega < 0 || std::isinf(omega)) {
           bad_field("omega", "must be a finite nonnegative number or auto");
         }
         c.omega = omega;
       }},
      {"epsilon_s",
       [](RunConfig& c, const std::string& v) {
         c.epsilon_s = positive_field("epsilon_s", v);
       }},
      {"epsilon_p",
       [](RunConfig& c, const std::string& v) {
         c.epsilon_p = positive_field("epsilon_p", v);
       }},
      {"epsilon_0",
       [](RunConfig& c, const std::string& v) {
         c.epsilon_0 = positive_field("epsilon_0", v);
       }},
      {"rng_seed",
       [](RunConfig& c, const std::string& v) {
         c.rng_seed = static_cast<std::uint64_t>(count_field("rng_seed", v, 0));
       }},
      {"max_candidates_per_release",
       [](RunConfig& c, const std::string& v) {
         c.max_candidates_per_release =
             count_field("max_candidates_per_release", v, 1);
       }},
      {"privacy_test",
       [](RunConfig& c, const std::string& v) {
         try {
           c.privacy_test = parse_test_mode(v);
         } catch (const Error&) {
           bad_field("privacy_test", "expected deterministic or randomized");
         }
       }},
      {"adjacency",
       [](RunConfig& c, const std::string& v) {
         try {
           c.adjacency = parse_adjacency(v);
         } catch (const Error&) {
           bad_field("adjacency", "expected add_remove or replace");
         }
       }},
      {"alpha",
       [](RunConfig& c, const std::string& v) {
         if (v == "auto") {
           c.alpha.reset();
           return;
         }
         const double alpha = positive_field("alpha", v);
         if (std::isinf(alpha)) bad_field("alpha", "must be finite");
         c.alpha = alpha;
       }},
      {"max_parents",
       [](RunConfig& c, const std::string& v) {
         c.max_parents = count_field("max_parents", v, 0);
       }},
      {"complexity_cap",
       [](RunConfig& c, const std::string& v) {
         c.complexity_cap = count_field("complexity_cap", v, 1);
       }},
      {"bins",
       [](RunConfig& c, const std::string& v) {
         c.bins = count_field("bins", v, 1);
       }},
      {"max_categories",
       [](RunConfig& c, const std::string& v) {
         c.max_categories = count_field("max_categories", v, 1);
       }},
      {"folds",
       [](RunConfig& c, const std::string& v) {
         c.folds = count_field("folds", v, 2);
       }},
      {"learning_rate",
       [](RunConfig& c, const std::string& v) {
         c.learning_rate = positive_field("learning_rate", v);
       }},
      {"epochs",
       [](RunConfig& c, const std::string& v) {
         c.epochs = count_field("epochs", v, 1);
       }},
      {"l2",
       [](RunConfig& c, const std::string& v) {
         c.l2 = real_field("l2", v);
         if (c.l2 < 0 || std::isinf(c.l2)) {
           bad_field("l2", "must be finite and nonnegative");
         }
       }},
      {"batch_size",
       [](RunConfig& c, const std::string& v) {
         c.batch_size = count_field("batch_size", v, 1);
       }},
      {"workers",
       [](RunConfig& c, const std::string& v) {
         c.workers = count_field("workers", v, 0);
       }},
      {"release_log",
       [](RunConfig& c, const std::string& v) {
         c.release_log = bool_field("release_log", v);
       }},
  };
  return *table;
}

void check_split(const RunConfig& c) {
  if (std::fabs(c.split_ds + c.split_dt + c.split_dp - 1.0) > 1e-9) {
    fail(ErrorCode::kInvalidArgument,
         "split_ds: split_ds + split_dt + split_dp must equal 1");
  }
}

}  // namespace

std::filesystem::path RunConfig::resolved_model_file() const {
  return model_file.empty() ? output_dir / "model.kv" : model_file;
}

SynthesisConfig RunConfig::synthesis_config(std::size_t num_attributes) const {
  SynthesisConfig s;
  s.omega = omega.value_or(0.5 * static_cast<double>(num_attributes));
  if (s.omega > static_cast<double>(num_attributes)) {
    fail(ErrorCode::kInvalidArgument,
         "omega: must not exceed the attribute count " +
             std::to_string(num_attributes));
  }
  s.k = k;
  s.gamma = gamma;
  s.epsilon_0 = epsilon_0;
  s.epsilon_s = epsilon_s;
  s.epsilon_p = epsilon_p;
  s.max_candidates_per_release = max_candidates_per_release;
  s.rng_seed = rng_seed;
  s.test_mode = privacy_test;
  s.validate(num_attributes);
  return s;
}

TrainOptions RunConfig::train_options(Loss loss) const {
  TrainOptions t;
  t.loss = loss;
  t.learning_rate = learning_rate;
  t.epochs = epochs;
  t.l2 = l2;
  t.batch_size = batch_size;
  return t;
}

void set_config_field(RunConfig& config, const std::string& key,
                      const std::string& value) {
  for (const auto& [name, setter] : setters()) {
    if (name == key) {
      setter(config, value);
      return;
    }
  }
  fail(ErrorCode::kInvalidArgument, key + ": unknown configuration key");
}

const std::vector<std::string>& config_field_names() {
  static const auto* names = [] {
    auto* out = new std::vector<std::string>;
    for (const auto& entry : setters()) out->push_back(entry.first);
    return out;
  }();
  return *names;
}

RunConfig load_run_config(
    const std::optional<std::filesystem::path>& config_file,
    const std::map<std::string, std::string>& environment,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  // Later layers replace earlier text before anything is validated, so an
  // override can repair a bad value in the file.
  std::vector<std::pair<std::string, std::string>> merged;
  const auto put = [&](const std::string& key, const std::string& value) {
    for (auto& entry : merged) {
      if (entry.first == key) {
        entry.second = value;
        return;
      }
    }
    merged.emplace_back(key, value);
  };
  if (config_file) {
    const KeyValueFile doc = KeyValueFile::read(*config_file);
    for (const auto& [key, value] : doc.entries()) put(key, value);
  }
  for (const auto& [key, value] : environment) put(key, value);
  for (const auto& [key, value] : overrides) put(key, value);
  RunConfig config;
  for (const auto& [key, value] : merged) set_config_field(config, key, value);
  check_split(config);
  return config;
}

std::map<std::string, std::string> config_environment() {
  std::map<std::string, std::string> out;
  for (const std::string& name : config_field_names()) {
    std::string var = "DSYN_" + name;
    std::transform(var.begin(), var.end(), var.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (const char* value = std::getenv(var.c_str())) out[name] = value;
  }
  return out;
}

}  // namespace dsyn
