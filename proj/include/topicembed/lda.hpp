// topicembed/lda.hpp
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
#include <unordered_map>
#include <vector>

#include "topicembed/corpus.hpp"

namespace topicembed {

struct LdaConfig {
  int batch_size = 256;
  double kappa = 0.7;    // learning-rate decay exponent
  double tau0 = 1024.0;  // learning-rate delay
  int passes = 10;
  double alpha = -1.0;   // symmetric document-topic prior; < 0 means 1/K
  double eta = -1.0;     // topic-word prior; < 0 means 1/K
  int max_e_iters = 100;
  double e_tol = 1e-3;   // mean |change in gamma| convergence threshold
  std::uint64_t seed = 42;
  int threads = 1;       // > 1 parallelizes E-steps within a batch

  std::uint64_t hash() const;
};

struct TopicDistribution {
  Eigen::VectorXd theta;       // K, sums to 1
  bool low_confidence = false; // prior fallback (no in-vocabulary tokens)
};

struct LdaModel {
  Eigen::MatrixXd lambda;  // K x V variational topic-word parameters, all > 0
  Eigen::VectorXd alpha;   // K
  double eta = 0.0;
  int K = 0;
  int vocab_size = 0;
  std::vector<std::string> vocab;  // column -> word, UNK included
  int unk_col = -1;
  std::uint64_t config_hash = 0;
  int max_e_iters = 100;

  // column for a word, -1 if absent
  int col_of(const std::string& word) const;
  std::uint64_t content_hash() const;

  void rebuild_index();

 private:
  std::unordered_map<std::string, int> word_to_col_;
};

// Online variational Bayes, mini-batched in corpus order. UNK tokens are
// excluded from training documents; documents left empty are skipped.
class OnlineLdaTrainer {
 public:
  OnlineLdaTrainer(const Corpus& corpus, int K, const LdaConfig& config);

  void run_pass();
  int passes_done() const { return passes_done_; }
  int skipped_documents() const { return skipped_docs_; }

  // variational bound estimate recorded after every mini-batch update
  const std::vector<double>& batch_bounds() const { return batch_bounds_; }

  LdaModel model() const;

 private:
  void update_batch(std::size_t begin, std::size_t end);

  LdaConfig config_;
  int K_;
  int V_;
  double alpha_sym_, eta_;
  std::vector<std::vector<std::pair<int, double>>> docs_;  // (word col, count)
  std::vector<std::string> vocab_;
  int unk_col_;
  Eigen::MatrixXd lambda_;
  std::int64_t update_count_ = 0;
  int passes_done_ = 0;
  int skipped_docs_ = 0;
  std::vector<double> batch_bounds_;
};

LdaModel train_lda(const Corpus& corpus, int K, const LdaConfig& config);

// Variational E-step posterior mean for one document. Documents with no
// in-vocabulary tokens get the normalized prior, flagged low-confidence.
TopicDistribution infer_theta(const LdaModel& model, const Document& doc);

// row-normalized lambda: P(word | topic), rows sum to 1
Eigen::MatrixXd topic_word_distribution(const LdaModel& model);

// per-word renormalization of P(word | topic): entry (w, t) = P(t | w),
// rows sum to 1. Words with zero mass in every topic get a uniform row and
// their columns are reported through `flagged`.
Eigen::MatrixXd topic_given_word(const LdaModel& model,
                                 std::vector<int>* flagged = nullptr);

// mean per-token log p(w | theta_hat, phi) over the given documents
double heldout_per_word_log_likelihood(const LdaModel& model,
                                       const std::vector<Document>& docs);

void save_lda(const LdaModel& model, const std::string& path);
LdaModel load_lda(const std::string& path);

// per-topic top-N words: "topic<TAB>rank<TAB>word<TAB>probability"
std::string export_topics_tsv(const LdaModel& model, int top_n);

}  // namespace topicembed
