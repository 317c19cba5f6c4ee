// topicembed/mathutil.hpp
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
#include <vector>

#include "topicembed/rng.hpp"

namespace topicembed {

// psi(x) for x > 0. Upward recurrence to x >= 10, then the asymptotic series
// through x^-12; absolute error is below 1e-12 on that range (target 1e-10).
double digamma(double x);

// two-sided tail probability of the standard normal at |z|
double normal_two_sided_p(double z);

// log(sigmoid(x)) without overflow
inline double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// E[log theta] for theta ~ Dirichlet(a), rows treated independently
Eigen::MatrixXd dirichlet_expectation_rows(const Eigen::MatrixXd& a);
Eigen::VectorXd dirichlet_expectation(const Eigen::VectorXd& a);

// Vose alias method; draws follow the normalized input weights exactly.
class AliasSampler {
 public:
  explicit AliasSampler(const std::vector<double>& weights);
  int draw(Rng& rng) const;
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

// Principal components of the rows of x, eigenvalues descending, each
// component oriented so its largest-magnitude entry is positive.
struct PcaResult {
  Eigen::VectorXd mean;         // d
  Eigen::MatrixXd components;   // d x d, one component per row
  Eigen::VectorXd eigenvalues;  // d, descending
};

PcaResult pca_fit(const Eigen::MatrixXd& x);

}  // namespace topicembed
