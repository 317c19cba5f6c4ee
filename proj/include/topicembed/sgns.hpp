// topicembed/sgns.hpp
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
#include <map>
#include <string>
#include <vector>

#include "topicembed/embedding.hpp"

namespace topicembed {

// Token stream ready for skip-gram training. Symbols are ordered by stream
// frequency (descending, then lexicographic); tokens rarer than min_count are
// dropped from the stream and get no row. A fallback UNK row is always
// allocated.
struct SgnsStream {
  std::vector<std::vector<int>> docs;  // rows into `symbols`
  std::vector<std::string> symbols;
  std::vector<std::int64_t> counts;    // stream counts; 0 for the fallback UNK
  int unk_row = -1;
};

SgnsStream make_sgns_stream(const std::vector<Document>& docs, int min_count);

// Sparse gradients of the per-pair negative-sampling loss, keyed by row.
struct SgnsGradient {
  std::map<int, Eigen::VectorXd> d_input;
  std::map<int, Eigen::VectorXd> d_output;
};

// Loss of one (center, context, negatives) triple under the current
// parameters:
//
//   L = -log sigmoid(u(context) . v(center))
//       - sum_k log sigmoid(-u(neg_k) . v(center))
//
// With `mixtures` (one row of P(topic | word) per word row), v and u are the
// composite vectors E_w + sum_t P(t|w) E_topic_t realized by a linear layer
// over [onehot(w); P(topic|w)]; topic rows are the trailing rows of the
// model. With mixtures == nullptr this is plain skip-gram.
double sgns_pair_loss(const EmbeddingModel& model,
                      const Eigen::MatrixXd* mixtures, int center, int context,
                      const std::vector<int>& negatives,
                      SgnsGradient* grad = nullptr);

// SGD trainer over window pairs with unigram^{3/4} negative sampling.
// topic_names are appended as trailing rows when non-empty; mixtures must
// then have one row per stream symbol. Deterministic for threads == 1.
EmbeddingModel train_sgns(const SgnsStream& stream,
                          const Eigen::MatrixXd* mixtures,
                          const std::vector<std::string>& topic_names,
                          const SkipGramConfig& config);

}  // namespace topicembed
