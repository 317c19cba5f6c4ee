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

#include "topicembed/mathutil.hpp"

#include <cmath>

#include "topicembed/common.hpp"

namespace topicembed {

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: argument must be positive");
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // Bernoulli-number coefficients of the asymptotic expansion
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0 -
                  inv2 * (691.0 / 32760.0))))));
  return result + std::log(x) - 0.5 * inv - series;
}

double normal_two_sided_p(double z) {
  return std::erfc(std::abs(z) / 1.4142135623730950488);
}

Eigen::MatrixXd dirichlet_expectation_rows(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    const double dig_sum = digamma(a.row(r).sum());
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out(r, c) = digamma(a(r, c)) - dig_sum;
  }
  return out;
}

Eigen::VectorXd dirichlet_expectation(const Eigen::VectorXd& a) {
  Eigen::VectorXd out(a.size());
  const double dig_sum = digamma(a.sum());
  for (Eigen::Index i = 0; i < a.size(); ++i) out(i) = digamma(a(i)) - dig_sum;
  return out;
}

AliasSampler::AliasSampler(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw DomainError("AliasSampler: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw DomainError("AliasSampler: bad weight");
    total += w;
  }
  if (total <= 0.0) throw DomainError("AliasSampler: weights sum to zero");

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total;

  std::vector<int> small, large;
  for (std::size_t i = n; i-- > 0;)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<int>(i));

  while (!small.empty() && !large.empty()) {
    const int s = small.back(); small.pop_back();
    const int l = large.back(); large.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (int i : large) prob_[i] = 1.0;
  for (int i : small) prob_[i] = 1.0;  // numerical leftovers
}

int AliasSampler::draw(Rng& rng) const {
  const auto i = static_cast<int>(rng.below(prob_.size()));
  return rng.uniform01() < prob_[i] ? i : alias_[i];
}

PcaResult pca_fit(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 2) throw DomainError("pca_fit: need at least 2 rows");

  PcaResult res;
  res.mean = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - res.mean.transpose();
  Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw DomainError("pca_fit: eigendecomposition failed");

  // solver returns eigenvalues ascending; flip to descending
  res.eigenvalues.resize(d);
  res.components.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    res.eigenvalues(i) = solver.eigenvalues()(d - 1 - i);
    Eigen::VectorXd comp = solver.eigenvectors().col(d - 1 - i);
    Eigen::Index argmax = 0;
    comp.cwiseAbs().maxCoeff(&argmax);
    if (comp(argmax) < 0.0) comp = -comp;
    res.components.row(i) = comp.transpose();
  }
  return res;
}

}  // namespace topicembed
