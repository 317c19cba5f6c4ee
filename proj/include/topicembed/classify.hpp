// topicembed/classify.hpp
//
// Copyright 2026 The topicembed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "topicembed/corpus.hpp"
#include "topicembed/features.hpp"

namespace topicembed {

struct FoldPlan {
  std::vector<int> fold_of;  // document index -> fold
  int folds = 0;
};

// Greedy group partition: groups sorted by size (seed-shuffled ties), each
// placed into the currently smallest fold. No group ever spans folds.
FoldPlan group_kfold(const std::vector<Document>& docs, int folds,
                     std::uint64_t seed);

// per-fold test-split class counts, one column per fold plus a total column
std::string fold_table_tsv(const FoldPlan& plan,
                           const std::vector<Document>& docs);

enum class LossKind { SvmHinge, Logistic };

struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  LossKind kind = LossKind::SvmHinge;
  double tolerance = 1e-5;
  double c_reg = 1.0;
  Provenance prov;
};

struct TrainTrace {
  std::vector<double> objective;  // per accepted epoch, non-increasing
};

// Minimizes 0.5 ||w||^2 + C sum_i loss(y_i, w.x_i + b) by full-batch
// (sub)gradient descent with Armijo backtracking; halts when the relative
// objective improvement drops below `tolerance`.
LinearModel train_linear(const FeatureMatrix& features,
                         const std::vector<int>& labels, LossKind kind,
                         double tolerance = 1e-5, double c_reg = 1.0,
                         TrainTrace* trace = nullptr);

// sign(w.x + b) mapped to {0, 1}; the boundary goes to the positive class
std::vector<int> predict(const LinearModel& model, const FeatureMatrix& features);

// micro and macro F1 for binary single-label predictions
std::pair<double, double> f1_scores(const std::vector<int>& truth,
                                    const std::vector<int>& predicted);

struct ZTestResult {
  double z = 0.0;
  double p = 1.0;  // two-sided
};

// Z = (p1 - p2) / sqrt(2 pbar (1 - pbar) / n), pbar = (p1 + p2) / 2
ZTestResult z_test(double p1, double p2, int n);

}  // namespace topicembed
