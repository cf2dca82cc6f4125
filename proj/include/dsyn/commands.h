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

// Pipeline orchestration behind the CLI subcommands. Every output goes under
// config.output_dir:
//
//   learn       model.kv (or model_file), schema.kv, split.kv,
//               structure_report.kv, timing.learn.kv
//   synthesize  synthetic.csv, run_stats.kv, timing.synthesize.kv,
//               release_log.csv (when release_log = true)
//   evaluate    eval_report.kv, tvd.csv, timing.evaluate.kv
//   report      report.kv
//
// The timing.* files and report.kv hold wall-clock numbers; everything else
// is a pure function of the input bytes and the configuration.

#ifndef DSYN_COMMANDS_H_
#define DSYN_COMMANDS_H_

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>

#include "dsyn/error.h"
#include "dsyn/eval.h"
#include "dsyn/model.h"
#include "dsyn/privacy.h"
#include "dsyn/run_config.h"

namespace dsyn {

// Wraps a module error with the pipeline phase it happened in.
class PhaseError : public Error {
 public:
  PhaseError(std::string phase, const Error& cause)
      : Error(cause.code(), phase + ": " + cause.what()),
        phase_(std::move(phase)) {}

  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

// Independent seeds for the pipeline's random phases.
enum class SeedPurpose : std::uint64_t {
  kSplit = 1,
  kStructureNoise = 2,
  kParameterNoise = 3,
  kMechanism = 4,
  kEvaluation = 5,
};
std::uint64_t derive_seed(std::uint64_t rng_seed, SeedPurpose purpose);

// ingest -> discretize -> split -> structure (DT) -> parameters (DP).
Model cmd_learn(const RunConfig& config, std::ostream& log);

// Runs the release mechanism against DS and writes the released rows.
RunStats cmd_synthesize(const RunConfig& config, std::size_t n,
                        std::ostream& log);

EvalReport cmd_evaluate(const RunConfig& config,
                        const std::filesystem::path& real_csv,
                        const std::filesystem::path& synth_csv,
                        std::ostream& log);

// Collects run statistics, timings and the evaluation into report.kv and
// prints it.
void cmd_report(const RunConfig& config, std::ostream& out);

}  // namespace dsyn

#endif  // DSYN_COMMANDS_H_
