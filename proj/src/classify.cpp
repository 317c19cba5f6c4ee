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

#include "topicembed/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "topicembed/mathutil.hpp"
#include "topicembed/rng.hpp"

namespace topicembed {

FoldPlan group_kfold(const std::vector<Document>& docs, int folds,
                     std::uint64_t seed) {
  if (folds < 2) throw DomainError("group_kfold: need at least 2 folds");

  std::map<std::string, std::vector<int>> groups;
  for (std::size_t i = 0; i < docs.size(); ++i)
    groups[docs[i].group_id].push_back(static_cast<int>(i));
  if (static_cast<int>(groups.size()) < folds)
    throw DomainError("group_kfold: fewer groups (" +
                      std::to_string(groups.size()) + ") than folds (" +
                      std::to_string(folds) + ")");

  std::vector<std::pair<std::string, std::vector<int>>> order(groups.begin(),
                                                              groups.end());
  // seed-keyed shuffle decides ties among equal-sized groups
  Rng rng(derive_seed(seed, "group_kfold"));
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.second.size() > b.second.size();
  });

  FoldPlan plan;
  plan.folds = folds;
  plan.fold_of.assign(docs.size(), -1);
  std::vector<std::size_t> fold_sizes(folds, 0);
  for (const auto& [group, members] : order) {
    const int target = static_cast<int>(std::min_element(fold_sizes.begin(),
                                                         fold_sizes.end()) -
                                        fold_sizes.begin());
    for (int doc : members) plan.fold_of[doc] = target;
    fold_sizes[target] += members.size();
  }
  return plan;
}

std::string fold_table_tsv(const FoldPlan& plan,
                           const std::vector<Document>& docs) {
  std::vector<std::array<int, 2>> counts(plan.folds, {0, 0});
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const int label = docs[i].label.value_or(-1);
    if (label == 0 || label == 1) ++counts[plan.fold_of[i]][label];
  }
  std::ostringstream out;
  out << "";
  for (int f = 1; f <= plan.folds; ++f) out << "\tFold " << f;
  out << "\tTotal\n";
  const char* row_names[2] = {"CT", "AD"};
  for (int cls = 0; cls < 2; ++cls) {
    out << row_names[cls];
    int total = 0;
    for (int f = 0; f < plan.folds; ++f) {
      out << '\t' << counts[f][cls];
      total += counts[f][cls];
    }
    out << '\t' << total << '\n';
  }
  return out.str();
}

namespace {

struct Objective {
  const Eigen::MatrixXd& x;
  const Eigen::VectorXd& y;  // +-1
  LossKind kind;
  double c_reg;

  double value(const Eigen::VectorXd& w, double b) const {
    const Eigen::VectorXd margins = y.cwiseProduct((x * w).array() + b).matrix();
    double loss = 0.0;
    if (kind == LossKind::SvmHinge) {
      loss = (1.0 - margins.array()).cwiseMax(0.0).sum();
    } else {
      for (Eigen::Index i = 0; i < margins.size(); ++i) {
        const double m = margins(i);
        // log(1 + exp(-m)) without overflow
        loss += m >= 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
      }
    }
    return 0.5 * w.squaredNorm() + c_reg * loss;
  }

  void gradient(const Eigen::VectorXd& w, double b, Eigen::VectorXd* gw,
                double* gb) const {
    const Eigen::VectorXd margins = y.cwiseProduct((x * w).array() + b).matrix();
    Eigen::VectorXd coeff(margins.size());
    if (kind == LossKind::SvmHinge) {
      for (Eigen::Index i = 0; i < margins.size(); ++i)
        coeff(i) = margins(i) < 1.0 ? -y(i) : 0.0;
    } else {
      for (Eigen::Index i = 0; i < margins.size(); ++i)
        coeff(i) = -y(i) * sigmoid(-margins(i));
    }
    *gw = w + c_reg * (x.transpose() * coeff);
    *gb = c_reg * coeff.sum();
  }
};

}  // namespace

LinearModel train_linear(const FeatureMatrix& features,
                         const std::vector<int>& labels, LossKind kind,
                         double tolerance, double c_reg, TrainTrace* trace) {
  const auto n = features.rows.rows();
  const auto d = features.rows.cols();
  if (static_cast<std::size_t>(n) != labels.size())
    throw DomainError("train_linear: label count mismatch");
  if (tolerance <= 0.0) throw DomainError("train_linear: tolerance must be > 0");

  Eigen::VectorXd y(n);
  std::set<int> classes;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1)
      throw DomainError("train_linear: labels must be 0 or 1");
    classes.insert(labels[i]);
    y(i) = labels[i] == 1 ? 1.0 : -1.0;
  }
  if (classes.size() < 2)
    throw DomainError("train_linear: training set holds a single class");

  const Objective obj{features.rows, y, kind, c_reg};
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  double value = obj.value(w, b);

  // descent with Armijo backtracking; Barzilai-Borwein initial step
  Eigen::VectorXd gw(d), prev_gw(d);
  double gb = 0.0, prev_gb = 0.0;
  Eigen::VectorXd prev_w = w;
  double prev_b = b;
  double step = 1.0 / (1.0 + c_reg * static_cast<double>(n));
  const int max_epochs = 20000;

  if (trace) trace->objective.push_back(value);
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    obj.gradient(w, b, &gw, &gb);
    const double g_sq = gw.squaredNorm() + gb * gb;
    if (g_sq < 1e-24) break;

    if (epoch > 0) {
      const Eigen::VectorXd dw = w - prev_w;
      const double db = b - prev_b;
      const double denom = dw.dot(gw - prev_gw) + db * (gb - prev_gb);
      if (denom > 1e-18)
        step = std::clamp((dw.squaredNorm() + db * db) / denom, 1e-12, 1e3);
    }
    prev_w = w;
    prev_b = b;
    prev_gw = gw;
    prev_gb = gb;

    double t = step;
    double next_value = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      next_value = obj.value(w - t * gw, b - t * gb);
      if (next_value <= value - 1e-4 * t * g_sq) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // non-smooth stall: no descent step found

    w -= t * gw;
    b -= t * gb;
    const double improvement = (value - next_value) / std::max(1.0, std::abs(value));
    value = next_value;
    if (trace) trace->objective.push_back(value);
    if (improvement < tolerance) break;
  }

  LinearModel model;
  model.weights = w;
  model.bias = b;
  model.kind = kind;
  model.tolerance = tolerance;
  model.c_reg = c_reg;
  model.prov.fit_doc_hashes = features.sorted_doc_hashes();
  return model;
}

std::vector<int> predict(const LinearModel& model, const FeatureMatrix& features) {
  if (features.rows.cols() != model.weights.size())
    throw DomainError("predict: dimension mismatch");
  const Eigen::VectorXd scores =
      (features.rows * model.weights).array() + model.bias;
  std::vector<int> out(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i)
    out[i] = scores(i) >= 0.0 ? 1 : 0;  // boundary -> positive class
  return out;
}

std::pair<double, double> f1_scores(const std::vector<int>& truth,
                                    const std::vector<int>& predicted) {
  if (truth.empty()) throw DomainError("f1_scores: empty input");
  if (truth.size() != predicted.size())
    throw DomainError("f1_scores: length mismatch");

  // per-class confusion counts over classes {0, 1}
  std::int64_t tp[2] = {0, 0}, fp[2] = {0, 0}, fn[2] = {0, 0};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (int cls = 0; cls < 2; ++cls) {
      const bool is_true = truth[i] == cls;
      const bool is_pred = predicted[i] == cls;
      if (is_true && is_pred) ++tp[cls];
      if (!is_true && is_pred) ++fp[cls];
      if (is_true && !is_pred) ++fn[cls];
    }
  }

  auto f1_of = [](std::int64_t tp_, std::int64_t fp_, std::int64_t fn_) {
    const double denom = static_cast<double>(2 * tp_ + fp_ + fn_);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp_) / denom;
  };

  const double micro = f1_of(tp[0] + tp[1], fp[0] + fp[1], fn[0] + fn[1]);
  const double macro = 0.5 * (f1_of(tp[0], fp[0], fn[0]) + f1_of(tp[1], fp[1], fn[1]));
  return {micro, macro};
}

ZTestResult z_test(double p1, double p2, int n) {
  if (n <= 0) throw DomainError("z_test: n must be positive");
  if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0)
    throw DomainError("z_test: proportions must lie in [0, 1]");
  const double pbar = 0.5 * (p1 + p2);
  if (pbar <= 0.0 || pbar >= 1.0)
    throw DomainError("z_test: degenerate pooled proportion");

  ZTestResult result;
  result.z = (p1 - p2) / std::sqrt(2.0 * pbar * (1.0 - pbar) / n);
  result.p = normal_two_sided_p(result.z);
  return result;
}

}  // namespace topicembed
