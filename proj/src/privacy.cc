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

#include "dsyn/privacy.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>

#include "dsyn/error.h"
#include "dsyn/parallel.h"

namespace dsyn {
namespace {

constexpr double kNegInf = -kInfinity;

// Per-attribute log factors of the generation probability for a fixed y:
// one for records that agree with y on the attribute, one for records that
// do not.
struct LogFactors {
  std::vector<double> agree;
  std::vector<double> disagree;

  LogFactors(std::span<const Category> y, const CptSet& cpts, double kappa) {
    const auto p = resample_probabilities(y, cpts);
    agree.resize(p.size());
    disagree.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      agree[i] = std::log(kappa + (1.0 - kappa) * p[i]);
      disagree[i] = std::log((1.0 - kappa) * p[i]);
    }
  }

  double log_probability(std::span<const Category> y,
                         std::span<const Category> d) const {
    double total = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      total += d[i] == y[i] ? agree[i] : disagree[i];
    }
    return total;
  }
};

constexpr std::size_t kAttemptBatch = 64;

struct Attempt {
  Candidate candidate;
  PrivacyTestReport report;
};

}  // namespace

std::size_t plausible_seed_count(std::span<const Category> y,
                                 std::span<const Category> seed,
                                 const DiscreteTable& dataset, double gamma,
                                 const CptSet& cpts, double omega,
                                 std::size_t workers) {
  require(gamma >= 1, "gamma must be at least 1");
  require(y.size() == cpts.num_attributes() && seed.size() == y.size() &&
              dataset.num_attributes() == y.size(),
          "plausible_seed_count: record width mismatch");
  const LogFactors factors(y, cpts, keep_probability(y.size(), omega));
  const double log_seed = factors.log_probability(y, seed);
  if (log_seed == kNegInf) {
    fail(ErrorCode::kInvalidArgument,
         "plausible_seed_count: the seed cannot generate the record");
  }
  const double log_gamma = std::log(gamma);

  std::atomic<std::size_t> total{0};
  parallel_for(
      dataset.num_rows(), workers, [&](std::size_t begin, std::size_t end) {
        std::size_t count = 0;
        for (std::size_t r = begin; r < end; ++r) {
          const double log_d = factors.log_probability(y, dataset.row(r));
          if (log_d == kNegInf) continue;
          if (std::fabs(log_seed - log_d) <= log_gamma) ++count;
        }
        total.fetch_add(count, std::memory_order_relaxed);
      });
  return total.load();
}

PrivacyTestReport deterministic_test(std::size_t count, std::size_t k) {
  require(k >= 1, "k must be at least 1");
  PrivacyTestReport report;
  report.plausible_count = count;
  report.threshold_used = static_cast<double>(k);
  report.passed = count >= k;
  report.mode = TestMode::kDeterministic;
  return report;
}

PrivacyTestReport randomized_test(std::size_t count, std::size_t k,
                                  double epsilon_0, Rng& rng) {
  require(k >= 1, "k must be at least 1");
  require(epsilon_0 > 0, "epsilon_0 must be positive");
  const double noise =
      std::isinf(epsilon_0) ? 0.0 : rng.laplace(1.0 / epsilon_0);
  PrivacyTestReport report;
  report.plausible_count = count;
  report.threshold_used = static_cast<double>(k) + noise;
  report.passed = static_cast<double>(count) >= report.threshold_used;
  report.mode = TestMode::kRandomized;
  return report;
}

PrivacyTestReport run_privacy_test(std::size_t count,
                                   const SynthesisConfig& config, Rng& rng) {
  if (config.test_mode == TestMode::kRandomized) {
    return randomized_test(count, config.k, config.epsilon_0, rng);
  }
  return deterministic_test(count, config.k);
}

std::string_view run_status_name(RunStatus status) {
  return status == RunStatus::kCompleted ? "completed" : "exhausted";
}

MechanismResult mechanism_f(const DiscreteTable& seeds,
                            const ParentSets& structure, const CptSet& cpts,
                            const SynthesisConfig& config,
                            std::size_t n_requested, std::size_t workers,
                            const AttemptObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  require(!seeds.empty(), "the seed dataset is empty");
  require(cpts.num_attributes() == seeds.num_attributes() &&
              structure.num_attributes() == seeds.num_attributes(),
          "model and seed dataset disagree on the attribute count");
  config.validate(seeds.num_attributes());

  MechanismResult result;
  RunStats& stats = result.stats;
  stats.requested = n_requested;
  const std::size_t budget = config.max_candidates_per_release * n_requested;

  std::vector<std::optional<Attempt>> batch;
  std::size_t next = 0;
  while (result.releases.size() < n_requested && next < budget) {
    const std::size_t size = std::min(kAttemptBatch, budget - next);
    batch.assign(size, std::nullopt);
    parallel_for(size, workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t b = begin; b < end; ++b) {
        Rng rng = Rng::stream(config.rng_seed, next + b);
        const std::size_t seed_row = rng.uniform_index(seeds.num_rows());
        const Record& seed = seeds.row(seed_row);
        KeepMask mask =
            sample_keep_mask(seeds.num_attributes(), config.omega, rng);
        Candidate candidate =
            generate_candidate(seed, seed_row, mask, structure, cpts, rng);
        const std::size_t count = plausible_seed_count(
            candidate.record, seed, seeds, config.gamma, cpts, config.omega, 1);
        PrivacyTestReport report = run_privacy_test(count, config, rng);
        batch[b] = Attempt{std::move(candidate), report};
      }
    });
    // Releases leave through this single ordered sink.
    for (std::size_t b = 0; b < size; ++b) {
      Attempt& attempt = *batch[b];
      ++stats.attempts;
      if (observer) observer(attempt.candidate, attempt.report);
      if (attempt.report.passed) {
        result.releases.push_back(
            ReleaseRecord{std::move(attempt.candidate.record), attempt.report});
        if (result.releases.size() == n_requested) break;
      }
    }
    next += size;
  }

  stats.releases = result.releases.size();
  stats.pass_rate = stats.attempts == 0
                        ? 0.0
                        : static_cast<double>(stats.releases) /
                              static_cast<double>(stats.attempts);
  stats.status = stats.releases == n_requested ? RunStatus::kCompleted
                                               : RunStatus::kBudgetExhausted;
  stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace dsyn
