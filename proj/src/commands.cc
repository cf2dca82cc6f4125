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

#include "dsyn/commands.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>

#include "dsyn/csv.h"
#include "dsyn/data_model.h"
#include "dsyn/parallel.h"
#include "dsyn/params.h"
#include "dsyn/random.h"
#include "dsyn/structure.h"

namespace dsyn {
namespace {

namespace fs = std::filesystem;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

template <typename Fn>
auto in_phase(const std::string& phase, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PhaseError&) {
    throw;
  } catch (const Error& e) {
    throw PhaseError(phase, e);
  } catch (const std::exception& e) {
    throw PhaseError(phase, Error(ErrorCode::kInternal, e.what()));
  }
}

void require_file(const std::string& field, const fs::path& path) {
  if (path.empty()) {
    fail(ErrorCode::kInvalidArgument, field + ": not set");
  }
  if (!fs::is_regular_file(path)) {
    fail(ErrorCode::kNotFound,
         field + ": file '" + path.string() + "' not found");
  }
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Reads a CSV against the model schema; header and labels must match it.
DiscreteTable load_with_schema(const fs::path& path, const Schema& schema) {
  const RawTable raw = ingest_csv(path, &schema);
  return discretize(raw, schema, 1);
}

std::size_t workers_of(const RunConfig& config) {
  return config.workers == 0 ? default_workers() : config.workers;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t rng_seed, SeedPurpose purpose) {
  return splitmix64(splitmix64(rng_seed) + static_cast<std::uint64_t>(purpose));
}

Model cmd_learn(const RunConfig& config, std::ostream& log) {
  in_phase("config", [&] { require_file("input_csv", config.input_csv); });
  PhaseTimes times;
  Stopwatch ingest_clock;
  const DiscreteTable table = in_phase("ingest", [&] {
    const RawTable raw = ingest_csv(config.input_csv);
    Schema schema = infer_schema(raw, config.max_categories);
    return discretize(raw, std::move(schema), config.bins);
  });
  const std::size_t m = table.num_attributes();
  log << "[learn] ingest: " << table.num_rows() << " rows, " << m
      << " attributes\n";

  const DatasetSplit parts = in_phase("split", [&] {
    Rng rng(derive_seed(config.rng_seed, SeedPurpose::kSplit));
    return split(table, config.split_fractions(), rng);
  });
  times.ingest = ingest_clock.seconds();
  log << "[learn] split: DS=" << parts.ds.num_rows()
      << " DT=" << parts.dt.num_rows() << " DP=" << parts.dp.num_rows() << '\n';

  Stopwatch structure_clock;
  const StructureResult learned = in_phase("structure", [&] {
    if (parts.dt.empty()) {
      fail(ErrorCode::kInvalidArgument, "the structure subset DT is empty");
    }
    StructureOptions options;
    options.max_parents = config.max_parents;
    options.complexity_cap = config.complexity_cap;
    options.workers = workers_of(config);
    std::optional<StructureNoise> noise;
    if (!std::isinf(config.epsilon_s)) {
      noise = StructureNoise{
          config.epsilon_s,
          derive_seed(config.rng_seed, SeedPurpose::kStructureNoise)};
    }
    return greedy_parent_search(parts.dt, options, noise);
  });
  times.structure = structure_clock.seconds();
  std::size_t edges = 0;
  for (const auto& p : learned.structure.parents) edges += p.size();
  log << "[learn] structure: " << edges << " edges, total score "
      << format_double(learned.structure.total_score()) << '\n';

  Stopwatch params_clock;
  Model model;
  model.schema = table.schema();
  model.structure = learned.structure;
  model.max_parents = config.max_parents;
  model.complexity_cap = config.complexity_cap;
  model.epsilon_s = config.epsilon_s;
  model.structure_rows = parts.dt.num_rows();
  model.parameter_rows = parts.dp.num_rows();
  model.cpts = in_phase("params", [&] {
    const auto counts = count_vectors(parts.dp, learned.structure);
    const double alpha =
        config.alpha.value_or(learn_hyperparameter(parts.dp.num_rows(), m));
    Rng rng(derive_seed(config.rng_seed, SeedPurpose::kParameterNoise));
    return estimate_cpts(counts, alpha, config.epsilon_p, config.adjacency,
                         rng);
  });
  times.params = params_clock.seconds();
  log << "[learn] params: alpha " << format_double(model.cpts.alpha)
      << ", epsilon_p " << format_double(model.cpts.epsilon_p) << '\n';

  in_phase("write", [&] {
    write_model(model, config.resolved_model_file());

    KeyValueFile schema_doc;
    write_schema(model.schema, schema_doc);
    schema_doc.write(config.output_dir / "schema.kv");

    KeyValueFile manifest;
    manifest.set_int("input_rows", static_cast<std::int64_t>(table.num_rows()));
    manifest.set_double("split_ds", config.split_ds);
    manifest.set_double("split_dt", config.split_dt);
    manifest.set_double("split_dp", config.split_dp);
    manifest.set_indices("ds_rows", parts.ds_rows);
    manifest.set_indices("dt_rows", parts.dt_rows);
    manifest.set_indices("dp_rows", parts.dp_rows);
    manifest.write(config.output_dir / "split.kv");

    KeyValueFile diagnostics;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& r = learned.report.attributes[j];
      const std::string prefix = "attribute." + std::to_string(j) + ".";
      diagnostics.set_strings(prefix + "name", {model.schema[j].name});
      diagnostics.set_indices(prefix + "parents", r.parents);
      diagnostics.set_double(prefix + "merit", r.merit);
      diagnostics.set_int(prefix + "candidates_examined",
                          static_cast<std::int64_t>(r.candidates_examined));
      diagnostics.set(prefix + "cap_pruned", r.cap_pruned ? "true" : "false");
    }
    diagnostics.write(config.output_dir / "structure_report.kv");

    KeyValueFile timing;
    timing.set_double("ingest_seconds", times.ingest);
    timing.set_double("structure_seconds", times.structure);
    timing.set_double("params_seconds", times.params);
    timing.write(config.output_dir / "timing.learn.kv");
  });
  log << "[learn] wrote " << config.resolved_model_file().string() << '\n';
  return model;
}

RunStats cmd_synthesize(const RunConfig& config, std::size_t n,
                        std::ostream& log) {
  const fs::path model_path = config.resolved_model_file();
  const fs::path manifest_path = config.output_dir / "split.kv";
  in_phase("config", [&] {
    require_file("input_csv", config.input_csv);
    require_file("model_file", model_path);
    require_file("split manifest", manifest_path);
  });
  const Model model = in_phase("load", [&] { return read_model(model_path); });
  const std::size_t m = model.num_attributes();
  const SynthesisConfig synthesis = in_phase("config", [&] {
    SynthesisConfig s = config.synthesis_config(m);
    s.epsilon_s = model.epsilon_s;
    s.epsilon_p = model.cpts.epsilon_p;
    s.rng_seed = derive_seed(config.rng_seed, SeedPurpose::kMechanism);
    return s;
  });
  const DiscreteTable seeds = in_phase("ingest", [&] {
    const DiscreteTable table =
        load_with_schema(config.input_csv, model.schema);
    const KeyValueFile manifest = KeyValueFile::read(manifest_path);
    if (manifest.get_int("input_rows") !=
        static_cast<std::int64_t>(table.num_rows())) {
      fail(ErrorCode::kSchemaMismatch,
           "input_csv has " + std::to_string(table.num_rows()) +
               " rows but the split manifest was made for " +
               manifest.get("input_rows"));
    }
    return select_rows(table, manifest.get_indices("ds_rows"));
  });
  log << "[synthesize] seeds: " << seeds.num_rows() << " rows\n";

  const MechanismResult result = in_phase("synthesize", [&] {
    return mechanism_f(seeds, model.structure, model.cpts, synthesis, n,
                       workers_of(config));
  });
  const RunStats& stats = result.stats;
  log << "[synthesize] " << stats.releases << "/" << n << " released after "
      << stats.attempts << " attempts (" << run_status_name(stats.status)
      << ")\n";

  in_phase("write", [&] {
    std::vector<Record> rows;
    rows.reserve(result.releases.size());
    for (const auto& r : result.releases) rows.push_back(r.record);
    write_file(config.output_dir / "synthetic.csv",
               format_table_csv(DiscreteTable(model.schema, std::move(rows))));

    KeyValueFile run_stats;
    run_stats.set("status", std::string(run_status_name(stats.status)));
    run_stats.set_int("requested", static_cast<std::int64_t>(stats.requested));
    run_stats.set_int("attempts", static_cast<std::int64_t>(stats.attempts));
    run_stats.set_int("releases", static_cast<std::int64_t>(stats.releases));
    run_stats.set_double("pass_rate", stats.pass_rate);
    run_stats.set_int("config.k", static_cast<std::int64_t>(synthesis.k));
    run_stats.set_double("config.gamma", synthesis.gamma);
    run_stats.set_double("config.omega", synthesis.omega);
    run_stats.set("config.privacy_test",
                  std::string(test_mode_name(synthesis.test_mode)));
    run_stats.set_double("config.epsilon_0", synthesis.epsilon_0);
    run_stats.set_double("config.epsilon_s", synthesis.epsilon_s);
    run_stats.set_double("config.epsilon_p", synthesis.epsilon_p);
    run_stats.set_int(
        "config.max_candidates_per_release",
        static_cast<std::int64_t>(synthesis.max_candidates_per_release));
    run_stats.set("config.rng_seed", std::to_string(config.rng_seed));
    run_stats.write(config.output_dir / "run_stats.kv");

    KeyValueFile timing;
    timing.set_double("synthesis_seconds", stats.seconds);
    timing.write(config.output_dir / "timing.synthesize.kv");

    if (config.release_log) {
      // The seed and, for the randomized test, the noisy threshold stay
      // private.
      std::string out =
          format_csv_row({"release", "plausible_count", "mode", "threshold"});
      for (std::size_t i = 0; i < result.releases.size(); ++i) {
        const auto& e = result.releases[i].report;
        out += format_csv_row({std::to_string(i),
                               std::to_string(e.plausible_count),
                               std::string(test_mode_name(e.mode)),
                               e.mode == TestMode::kDeterministic
                                   ? format_double(e.threshold_used)
                                   : std::string()});
      }
      write_file(config.output_dir / "release_log.csv", out);
    }
  });
  return stats;
}

EvalReport cmd_evaluate(const RunConfig& config, const fs::path& real_csv,
                        const fs::path& synth_csv, std::ostream& log) {
  const fs::path model_path = config.resolved_model_file();
  in_phase("config", [&] {
    require_file("real", real_csv);
    require_file("synth", synth_csv);
    require_file("model_file", model_path);
  });
  const Model model = in_phase("load", [&] { return read_model(model_path); });
  Stopwatch clock;
  const DiscreteTable real = in_phase(
      "ingest", [&] { return load_with_schema(real_csv, model.schema); });
  const DiscreteTable synth = in_phase(
      "ingest", [&] { return load_with_schema(synth_csv, model.schema); });

  EvalReport report = in_phase("evaluate", [&] {
    if (real.empty() || synth.empty())
      fail(ErrorCode::kEmptyInput, "empty table");
    EvalReport r;
    const std::uint64_t seed =
        derive_seed(config.rng_seed, SeedPurpose::kEvaluation);
    r.lr =
        distinguishability(real, synth, config.train_options(Loss::kLogistic),
                           config.folds, seed, workers_of(config));
    r.svm = distinguishability(real, synth, config.train_options(Loss::kHinge),
                               config.folds, seed, workers_of(config));
    for (std::size_t j = 0; j < model.num_attributes(); ++j) {
      r.marginal_tvd.push_back(marginal_tvd(real, synth, j));
    }
    const fs::path stats_path = config.output_dir / "run_stats.kv";
    if (fs::is_regular_file(stats_path)) {
      r.pass_rate = KeyValueFile::read(stats_path).get_double("pass_rate");
    }
    return r;
  });
  const double seconds = clock.seconds();
  log << "[evaluate] lr " << fixed6(report.lr.mean_accuracy) << " +- "
      << fixed6(report.lr.sd) << ", svm " << fixed6(report.svm.mean_accuracy)
      << " +- " << fixed6(report.svm.sd) << '\n';

  in_phase("write", [&] {
    eval_report_document(report).write(config.output_dir / "eval_report.kv");
    write_file(config.output_dir / "tvd.csv", tvd_csv(report, model.schema));
    KeyValueFile timing;
    timing.set_double("eval_seconds", seconds);
    timing.write(config.output_dir / "timing.evaluate.kv");
  });
  return report;
}

void cmd_report(const RunConfig& config, std::ostream& out) {
  in_phase("report", [&] {
    const auto read_if =
        [&](const std::string& name) -> std::optional<KeyValueFile> {
      const fs::path p = config.output_dir / name;
      if (!fs::is_regular_file(p)) return std::nullopt;
      return KeyValueFile::read(p);
    };
    const auto run_stats = read_if("run_stats.kv");
    const auto eval = read_if("eval_report.kv");
    const auto learn_timing = read_if("timing.learn.kv");
    const auto synth_timing = read_if("timing.synthesize.kv");
    const auto eval_timing = read_if("timing.evaluate.kv");
    if (!run_stats && !eval && !learn_timing) {
      fail(ErrorCode::kNotFound,
           "no pipeline outputs in '" + config.output_dir.string() + "'");
    }

    RunStats stats;
    if (run_stats) {
      stats.attempts = static_cast<std::size_t>(run_stats->get_int("attempts"));
      stats.releases = static_cast<std::size_t>(run_stats->get_int("releases"));
      stats.pass_rate = run_stats->get_double("pass_rate");
    }
    PhaseTimes phases;
    if (learn_timing) {
      phases.ingest = learn_timing->get_double("ingest_seconds");
      phases.structure = learn_timing->get_double("structure_seconds");
      phases.params = learn_timing->get_double("params_seconds");
    }
    if (synth_timing) {
      phases.synthesis = synth_timing->get_double("synthesis_seconds");
    }
    if (eval_timing) phases.eval = eval_timing->get_double("eval_seconds");
    const TimingReport timing = timing_report(stats, phases);

    KeyValueFile doc;
    if (run_stats) {
      for (const auto& [k, v] : run_stats->entries()) doc.set("run." + k, v);
    }
    if (eval) {
      for (const auto& [k, v] : eval->entries()) doc.set("eval." + k, v);
    }
    doc.set("timing.ingest_seconds", fixed6(phases.ingest));
    doc.set("timing.structure_seconds", fixed6(phases.structure));
    doc.set("timing.params_seconds", fixed6(phases.params));
    doc.set("timing.synthesis_seconds", fixed6(phases.synthesis));
    doc.set("timing.eval_seconds", fixed6(phases.eval));
    doc.set("timing.total_seconds", fixed6(timing.phase_total));
    doc.set("timing.records_per_second", fixed6(timing.records_per_second));
    doc.write(config.output_dir / "report.kv");
    out << doc.to_string();
  });
}

}  // namespace dsyn
