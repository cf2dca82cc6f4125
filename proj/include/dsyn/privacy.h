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

// Plausible-deniability release test and the generate / test / release loop.
//
// A candidate y generated from seed s is released only if at least k records
// d of the seed dataset are plausible seeds for it:
//
//   1 / gamma <= Pr[M(s) = y] / Pr[M(d) = y] <= gamma.
//
// The seed itself always qualifies. The randomized variant compares the count
// against k + Laplace(1 / epsilon_0) instead of k.

#ifndef DSYN_PRIVACY_H_
#define DSYN_PRIVACY_H_

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "dsyn/data_model.h"
#include "dsyn/params.h"
#include "dsyn/random.h"
#include "dsyn/structure.h"
#include "dsyn/synth.h"

namespace dsyn {

struct PrivacyTestReport {
  std::size_t plausible_count = 0;
  double threshold_used = 0;
  bool passed = false;
  TestMode mode = TestMode::kDeterministic;
};

struct ReleaseRecord {
  Record record;
  PrivacyTestReport report;
};

// Number of records in `dataset` whose generation probability for y is
// within a factor gamma of the seed's. gamma = inf admits every record with
// positive probability.
std::size_t plausible_seed_count(std::span<const Category> y,
                                 std::span<const Category> seed,
                                 const DiscreteTable& dataset, double gamma,
                                 const CptSet& cpts, double omega,
                                 std::size_t workers = 1);

PrivacyTestReport deterministic_test(std::size_t count, std::size_t k);

// epsilon_0 = inf consumes no randomness and matches deterministic_test.
PrivacyTestReport randomized_test(std::size_t count, std::size_t k,
                                  double epsilon_0, Rng& rng);

PrivacyTestReport run_privacy_test(std::size_t count,
                                   const SynthesisConfig& config, Rng& rng);

enum class RunStatus { kCompleted, kBudgetExhausted };

std::string_view run_status_name(RunStatus status);

struct RunStats {
  std::size_t requested = 0;
  std::size_t attempts = 0;
  std::size_t releases = 0;
  double pass_rate = 0;  // releases / attempts
  double seconds = 0;
  RunStatus status = RunStatus::kCompleted;
};

struct MechanismResult {
  std::vector<ReleaseRecord> releases;
  RunStats stats;
};

// Called once per attempt, in attempt order, with the candidate and its
// verdict. Lets callers audit both the released and the discarded stream.
using AttemptObserver =
    std::function<void(const Candidate&, const PrivacyTestReport&)>;

// Draws seeds uniformly from `seeds`, generates a candidate from each and
// releases the ones that pass the configured test. Stops after
// `n_requested` releases or max_candidates_per_release * n_requested
// attempts, whichever comes first. Attempt a uses rng stream
// (config.rng_seed, a), so the output is independent of `workers`.
MechanismResult mechanism_f(const DiscreteTable& seeds,
                            const ParentSets& structure, const CptSet& cpts,
                            const SynthesisConfig& config,
                            std::size_t n_requested, std::size_t workers = 1,
                            const AttemptObserver& observer = {});

}  // namespace dsyn

#endif  // DSYN_PRIVACY_H_
