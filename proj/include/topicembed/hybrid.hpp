// topicembed/hybrid.hpp
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
#include <optional>
#include <string>
#include <vector>

#include "topicembed/embedding.hpp"
#include "topicembed/lda.hpp"

namespace topicembed {

// "topic_1" ... "topic_{K+1}"; index is 1-based, K+1 is the sunk topic
std::string topic_symbol(int index);
std::optional<int> parse_topic_symbol(const std::string& symbol);

struct TopicVectorSet {
  Eigen::MatrixXd vectors;  // K x N
  std::uint64_t source_lda = 0;
  std::uint64_t source_embedding = 0;
};

// (sum_i p_i W_i) / V. The divisor is the vocabulary size V as printed;
// normalized_divisor switches to sum(p) instead.
Eigen::VectorXd topic_vector(const Eigen::VectorXd& phi_row,
                             const std::vector<std::string>& vocab,
                             const EmbeddingModel& embeddings,
                             bool normalized_divisor = false);

TopicVectorSet build_topic_vectors(const LdaModel& lda,
                                   const EmbeddingModel& embeddings,
                                   bool normalized_divisor = false);

// (sum_i theta_i T_i) / K, same divisor convention
Eigen::VectorXd avg_topic_vector(const TopicDistribution& theta,
                                 const TopicVectorSet& topic_vectors,
                                 bool normalized_divisor = false);

// Skip-gram over composite vectors E_w + sum_t P(t|w) E_topic_t; words and
// topics share one (V + K) x N table. With K = 0 this is exactly
// train_skipgram.
EmbeddingModel train_topical_embedding(const Corpus& corpus, const LdaModel& lda,
                                       const SkipGramConfig& config);

struct AugmentedCorpus {
  std::vector<Document> documents;  // repetitions x original documents
  int repetitions = 0;
  std::uint64_t rng_seed = 0;
  int n_topics = 0;  // K; symbols run topic_1 .. topic_{K+1}
};

// Each of `repetitions` passes independently replaces every token with
// probability p_replace by the topic symbol of argmax P(topic | word) when
// that max is >= threshold, else by the sunk topic_(K+1). Words outside the
// LDA vocabulary sink as well. Passes are concatenated.
AugmentedCorpus induce_topics(const Corpus& corpus, const LdaModel& lda,
                              double p_replace, double threshold,
                              int repetitions, std::uint64_t seed);

// plain skip-gram over the augmented stream; topic symbols are ordinary
// tokens, min_count included
EmbeddingModel train_topic_induced(const AugmentedCorpus& augmented,
                                   const SkipGramConfig& config);

// default configuration for the induced variant (dim 400)
SkipGramConfig topic_induced_defaults();

// embedding row of topic_j, j = argmax infer_theta (ties toward the lowest
// topic index)
Eigen::VectorXd most_prevalent_topic_vector(const Document& doc,
                                            const LdaModel& lda,
                                            const EmbeddingModel& model);

// augmented corpora reuse the corpus archive format (topic symbols inline)
void write_augmented_archive(const AugmentedCorpus& augmented,
                             const std::string& dir);
AugmentedCorpus read_augmented_archive(const std::string& dir);

}  // namespace topicembed
