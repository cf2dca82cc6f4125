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

#include "dsyn/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "dsyn/csv.h"
#include "dsyn/error.h"
#include "dsyn/parallel.h"

namespace dsyn {
namespace {

// log(1 + exp(-t)) without overflow.
double logistic_loss(double t) {
  return t > 0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

// d/dt log(1 + exp(-t)) = -1 / (1 + exp(t)).
double logistic_loss_derivative(double t) {
  if (t > 0) {
    const double e = std::exp(-t);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(t));
}

double example_loss(Loss loss, double margin) {
  return loss == Loss::kLogistic ? logistic_loss(margin)
                                 : std::max(0.0, 1.0 - margin);
}

double example_loss_derivative(Loss loss, double margin) {
  if (loss == Loss::kLogistic) return logistic_loss_derivative(margin);
  return margin < 1.0 ? -1.0 : 0.0;
}

double sign_of(int label) { return label == 1 ? 1.0 : -1.0; }

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.uniform_index(i)]);
  }
}

}  // namespace

FeatureMatrix FeatureMatrix::select(std::span<const std::size_t> rows) const {
  FeatureMatrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

FeatureMatrix one_hot_encode(const DiscreteTable& table) {
  const auto cards = cardinalities(table.schema());
  std::vector<std::size_t> offset(cards.size(), 0);
  std::size_t width = 0;
  for (std::size_t j = 0; j < cards.size(); ++j) {
    offset[j] = width;
    width += cards[j];
  }
  FeatureMatrix out(table.num_rows(), width);
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    auto dst = out.row(r);
    const Record& rec = table.row(r);
    for (std::size_t j = 0; j < rec.size(); ++j) dst[offset[j] + rec[j]] = 1.0;
  }
  return out;
}

std::string_view loss_name(Loss loss) {
  return loss == Loss::kLogistic ? "logistic" : "hinge";
}

double LinearModel::decision(std::span<const double> x) const {
  double z = bias;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
  return z;
}

double objective(const LinearModel& model, const FeatureMatrix& x,
                 std::span<const int> labels, double l2) {
  double total = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    total +=
        example_loss(model.loss, sign_of(labels[i]) * model.decision(x.row(i)));
  }
  double norm = 0;
  for (double w : model.weights) norm += w * w;
  const double n = static_cast<double>(std::max<std::size_t>(1, x.rows()));
  return total / n + 0.5 * l2 * norm;
}

double objective_gradient(const LinearModel& model, const FeatureMatrix& x,
                          std::span<const int> labels, double l2,
                          std::vector<double>& grad_weights,
                          double& grad_bias) {
  const std::size_t d = model.weights.size();
  grad_weights.assign(d, 0.0);
  grad_bias = 0;
  double total = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double s = sign_of(labels[i]);
    const auto row = x.row(i);
    const double margin = s * model.decision(row);
    total += example_loss(model.loss, margin);
    const double g = s * example_loss_derivative(model.loss, margin);
    if (g == 0) continue;
    for (std::size_t j = 0; j < d; ++j) grad_weights[j] += g * row[j];
    grad_bias += g;
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, x.rows()));
  double norm = 0;
  for (std::size_t j = 0; j < d; ++j) {
    grad_weights[j] = grad_weights[j] / n + l2 * model.weights[j];
    norm += model.weights[j] * model.weights[j];
  }
  grad_bias /= n;
  return total / n + 0.5 * l2 * norm;
}

TrainResult train_linear(const FeatureMatrix& x, std::span<const int> labels,
                         const TrainOptions& options, Rng& rng) {
  require(x.rows() == labels.size(), "train_linear: label count mismatch");
  require(x.rows() >= 2, "train_linear: need at least two examples");
  bool has0 = false, has1 = false;
  for (int y : labels) {
    require(y == 0 || y == 1, "train_linear: labels must be 0 or 1");
    (y == 1 ? has1 : has0) = true;
  }
  require(has0 && has1, "train_linear: labels contain a single class");
  require(options.learning_rate > 0 && options.epochs > 0 &&
              options.batch_size > 0 && options.l2 >= 0,
          "train_linear: invalid hyperparameters");

  TrainResult result;
  LinearModel& model = result.model;
  model.loss = options.loss;
  model.weights.assign(x.cols(), 0.0);
  const std::size_t d = x.cols();

  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad(d);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t start = 0; start < order.size();
         start += options.batch_size) {
      const std::size_t end =
          std::min(order.size(), start + options.batch_size);
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_bias = 0;
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        const double s = sign_of(labels[i]);
        const auto row = x.row(i);
        const double g =
            s * example_loss_derivative(model.loss, s * model.decision(row));
        if (g == 0) continue;
        for (std::size_t j = 0; j < d; ++j) grad[j] += g * row[j];
        grad_bias += g;
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (std::size_t j = 0; j < d; ++j) {
        model.weights[j] -= options.learning_rate *
                            (grad[j] * inv + options.l2 * model.weights[j]);
      }
      model.bias -= options.learning_rate * grad_bias * inv;
    }
    result.epoch_loss.push_back(objective(model, x, labels, options.l2));
  }
  return result;
}

double accuracy(const LinearModel& model, const FeatureMatrix& x,
                std::span<const int> labels) {
  if (x.rows() == 0) return 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    correct += model.predict(x.row(i)) == labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(x.rows());
}

Distinguishability distinguishability(const DiscreteTable& real,
                                      const DiscreteTable& synth,
                                      const TrainOptions& options,
                                      std::size_t folds, std::uint64_t seed,
                                      std::size_t workers) {
  if (real.empty() || synth.empty()) {
    fail(ErrorCode::kEmptyInput, "empty table");
  }
  if (real.schema() != synth.schema()) {
    fail(ErrorCode::kSchemaMismatch,
         "real and synthetic tables have different schemas");
  }
  require(folds >= 2, "folds must be at least 2");
  const std::size_t per_class = std::min(real.num_rows(), synth.num_rows());
  require(per_class >= folds, "each class needs at least one row per fold");

  Rng rng = Rng::stream(seed, 0);
  auto pick = [&](std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    shuffle(idx, rng);
    idx.resize(per_class);
    return idx;
  };
  const std::vector<std::size_t> real_idx = pick(real.num_rows());
  const std::vector<std::size_t> synth_idx = pick(synth.num_rows());

  // Stacked data: first the real sample, then the synthetic one.
  const FeatureMatrix real_x = one_hot_encode(select_rows(real, real_idx));
  const FeatureMatrix synth_x = one_hot_encode(select_rows(synth, synth_idx));
  FeatureMatrix x(2 * per_class, real_x.cols());
  std::vector<int> labels(2 * per_class);
  std::vector<std::size_t> fold_of(2 * per_class);
  for (std::size_t i = 0; i < per_class; ++i) {
    std::copy(real_x.row(i).begin(), real_x.row(i).end(), x.row(i).begin());
    std::copy(synth_x.row(i).begin(), synth_x.row(i).end(),
              x.row(per_class + i).begin());
    labels[i] = 0;
    labels[per_class + i] = 1;
    // Rows inside each class are already in random order.
    fold_of[i] = i % folds;
    fold_of[per_class + i] = i % folds;
  }

  Distinguishability out;
  out.fold_accuracy.assign(folds, 0.0);
  parallel_for(folds, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      std::vector<std::size_t> train, test;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        (fold_of[i] == f ? test : train).push_back(i);
      }
      std::vector<int> train_y, test_y;
      for (std::size_t i : train) train_y.push_back(labels[i]);
      for (std::size_t i : test) test_y.push_back(labels[i]);
      Rng fold_rng = Rng::stream(seed, f + 1);
      const TrainResult trained =
          train_linear(x.select(train), train_y, options, fold_rng);
      out.fold_accuracy[f] = accuracy(trained.model, x.select(test), test_y);
    }
  });
  out.mean_accuracy =
      std::accumulate(out.fold_accuracy.begin(), out.fold_accuracy.end(), 0.0) /
      static_cast<double>(folds);
  double ss = 0;
  for (double a : out.fold_accuracy) {
    ss += (a - out.mean_accuracy) * (a - out.mean_accuracy);
  }
  out.sd = std::sqrt(ss / static_cast<double>(folds - 1));
  return out;
}

double marginal_tvd(const DiscreteTable& real, const DiscreteTable& synth,
                    std::size_t attribute) {
  if (real.schema() != synth.schema()) {
    fail(ErrorCode::kSchemaMismatch,
         "real and synthetic tables have different schemas");
  }
  require(attribute < real.num_attributes(), "attribute index out of range");
  const auto a = real.marginal_counts(attribute);
  const auto b = synth.marginal_counts(attribute);
  const double na = static_cast<double>(real.num_rows());
  const double nb = static_cast<double>(synth.num_rows());
  double total = 0;
  for (std::size_t v = 0; v < a.size(); ++v) {
    const double pa = na > 0 ? a[v] / na : 0.0;
    const double pb = nb > 0 ? b[v] / nb : 0.0;
    total += std::fabs(pa - pb);
  }
  return std::min(1.0, 0.5 * total);
}

TimingReport timing_report(const RunStats& stats, const PhaseTimes& phases) {
  TimingReport out;
  out.phases = phases;
  out.phase_total = phases.ingest + phases.structure + phases.params +
                    phases.synthesis + phases.eval;
  out.records_per_second =
      stats.releases == 0 || phases.synthesis <= 0
          ? 0.0
          : static_cast<double>(stats.releases) / phases.synthesis;
  return out;
}

KeyValueFile eval_report_document(const EvalReport& report) {
  KeyValueFile doc;
  if (report.pass_rate) doc.set("pass_rate", fixed6(*report.pass_rate));
  doc.set("lr_accuracy", fixed6(report.lr.mean_accuracy));
  doc.set("lr_accuracy_sd", fixed6(report.lr.sd));
  doc.set("svm_accuracy", fixed6(report.svm.mean_accuracy));
  doc.set("svm_accuracy_sd", fixed6(report.svm.sd));
  std::string lr_folds, svm_folds;
  for (double a : report.lr.fold_accuracy) {
    lr_folds += (lr_folds.empty() ? "" : " ") + fixed6(a);
  }
  for (double a : report.svm.fold_accuracy) {
    svm_folds += (svm_folds.empty() ? "" : " ") + fixed6(a);
  }
  doc.set("lr_fold_accuracy", lr_folds);
  doc.set("svm_fold_accuracy", svm_folds);
  double max_tvd = 0, mean_tvd = 0;
  for (double t : report.marginal_tvd) {
    max_tvd = std::max(max_tvd, t);
    mean_tvd += t;
  }
  if (!report.marginal_tvd.empty()) {
    mean_tvd /= static_cast<double>(report.marginal_tvd.size());
  }
  doc.set("marginal_tvd_mean", fixed6(mean_tvd));
  doc.set("marginal_tvd_max", fixed6(max_tvd));
  return doc;
}

std::string tvd_csv(const EvalReport& report, const Schema& schema) {
  std::string out = format_csv_row({"attribute", "tvd"});
  for (std::size_t j = 0; j < report.marginal_tvd.size(); ++j) {
    out += format_csv_row({schema[j].name, fixed6(report.marginal_tvd[j])});
  }
  return out;
}

}  // namespace dsyn
