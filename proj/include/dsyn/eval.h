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

// Release evaluation: marginal fidelity, throughput, and how well linear
// classifiers (logistic regression, linear SVM) tell real rows from
// synthetic ones.

#ifndef DSYN_EVAL_H_
#define DSYN_EVAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsyn/data_model.h"
#include "dsyn/kv_file.h"
#include "dsyn/privacy.h"
#include "dsyn/random.h"

namespace dsyn {

class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) {
    return {values_.data() + i * cols_, cols_};
  }
  double at(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }

  // Rows in the order given.
  FeatureMatrix select(std::span<const std::size_t> rows) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// One indicator block per attribute; width is the sum of domain sizes.
FeatureMatrix one_hot_encode(const DiscreteTable& table);

enum class Loss { kLogistic, kHinge };

std::string_view loss_name(Loss loss);

struct TrainOptions {
  Loss loss = Loss::kLogistic;
  double learning_rate = 0.1;
  std::size_t epochs = 300;
  double l2 = 1e-4;
  std::size_t batch_size = 32;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0;
  Loss loss = Loss::kLogistic;

  double decision(std::span<const double> x) const;
  int predict(std::span<const double> x) const {
    return decision(x) >= 0 ? 1 : 0;
  }
};

struct TrainResult {
  LinearModel model;
  // Full-data objective after each epoch.
  std::vector<double> epoch_loss;
};

// Mean loss plus (l2 / 2) * |w|^2; the bias is not regularized. Labels are
// 0/1.
double objective(const LinearModel& model, const FeatureMatrix& x,
                 std::span<const int> labels, double l2);

// Gradient of `objective` with respect to (weights, bias); returns the
// objective. Subgradient for the hinge loss.
double objective_gradient(const LinearModel& model, const FeatureMatrix& x,
                          std::span<const int> labels, double l2,
                          std::vector<double>& grad_weights, double& grad_bias);

TrainResult train_linear(const FeatureMatrix& x, std::span<const int> labels,
                         const TrainOptions& options, Rng& rng);

double accuracy(const LinearModel& model, const FeatureMatrix& x,
                std::span<const int> labels);

struct Distinguishability {
  double mean_accuracy = 0;
  double sd = 0;
  std::vector<double> fold_accuracy;
};

// Labels real rows 0 and synthetic rows 1, down-samples the larger side to
// the smaller, and reports stratified k-fold held-out accuracy. Fold f trains
// with rng stream (seed, f + 1); down-sampling and fold assignment use
// stream (seed, 0).
Distinguishability distinguishability(const DiscreteTable& real,
                                      const DiscreteTable& synth,
                                      const TrainOptions& options,
                                      std::size_t folds, std::uint64_t seed,
                                      std::size_t workers = 1);

// Half the L1 distance between the attribute's empirical marginals.
double marginal_tvd(const DiscreteTable& real, const DiscreteTable& synth,
                    std::size_t attribute);

struct PhaseTimes {
  double ingest = 0;
  double structure = 0;
  double params = 0;
  double synthesis = 0;  // generation and privacy test
  double eval = 0;
};

struct TimingReport {
  PhaseTimes phases;
  double phase_total = 0;
  double records_per_second = 0;
};

TimingReport timing_report(const RunStats& stats, const PhaseTimes& phases);

struct EvalReport {
  // Filled when a synthesis run's statistics are available.
  std::optional<double> pass_rate;
  double records_per_second = 0;
  std::vector<double> marginal_tvd;
  Distinguishability lr;
  Distinguishability svm;
};

// Byte-stable text: every number with six decimals. Timing is left to the
// timing report so the file depends only on inputs and seed.
KeyValueFile eval_report_document(const EvalReport& report);
std::string tvd_csv(const EvalReport& report, const Schema& schema);

}  // namespace dsyn

#endif  // DSYN_EVAL_H_
