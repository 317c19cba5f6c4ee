// topicembed/pipeline.hpp
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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topicembed/classify.hpp"
#include "topicembed/features.hpp"

namespace topicembed {

// document representations of the classification tables
enum class Scheme {
  Lda,                    // inferred topic distribution, K dims
  Word2vec,               // average embedding, N dims
  Tfidf,                  // train-fitted tf-idf, top-N dims
  Concat,                 // [avg word2vec ; theta], N + K
  TopicVectors,           // theta-weighted topic vectors, N
  Topical,                // avg word2vec over the topical embedding, N
  TopicalPlusTopic,       // + most prevalent topic row, 2N
  TopicInduced,           // avg word2vec over the induced embedding, N
  TopicInducedPlusTopic,  // + most prevalent topic row, 2N
};

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme scheme);
const std::vector<std::string>& all_scheme_names();
bool scheme_needs_lda(Scheme scheme);
bool scheme_needs_embedding(Scheme scheme);
bool scheme_needs_topic_rows(Scheme scheme);

struct EvalOptions {
  Scheme scheme = Scheme::Lda;
  bool pca_drop_first = false;
  int folds = 5;
  std::uint64_t seed = 42;
  int tfidf_top_n = 1000;
  LossKind classifier = LossKind::SvmHinge;
  double tolerance = 1e-5;
  double c_reg = 1.0;
  bool normalized_divisor = false;  // Eq-2/Eq-3 divisor switch
};

// Per-document featurization for every scheme except tf-idf (which must be
// fitted on a train split; see run_evaluation).
FeatureMatrix featurize_documents(const std::vector<Document>& docs,
                                  Scheme scheme, const LdaModel* lda,
                                  const EmbeddingModel* embedding,
                                  const EvalOptions& opts);

struct FoldScore {
  int fold = 0;
  double f1_micro = 0.0;
  double f1_macro = 0.0;
  int n_test = 0;
};

struct PredictionRecord {
  std::string doc_id;
  int fold = 0;
  int truth = 0;
  int predicted = 0;
};

struct EvalReport {
  std::string scheme;
  int feature_dim = 0;
  std::vector<FoldScore> per_fold;
  double avg_f1_micro = 0.0;
  double avg_f1_macro = 0.0;
  std::vector<PredictionRecord> predictions;
  bool leakage_guard_ok = false;
  int leakage_artifacts_checked = 0;
  std::string fold_table;  // test-split class counts per fold
  nlohmann::json config;
};

// Group k-fold evaluation. IDF tables, PCA transforms and classifiers are
// fitted strictly on each fold's train split; their provenance hashes are
// checked against the test split before any prediction is made.
EvalReport run_evaluation(const Corpus& corpus, const LdaModel* lda,
                          const EmbeddingModel* embedding,
                          const EvalOptions& opts);

nlohmann::json report_to_json(const EvalReport& report);
std::string report_table_tsv(const EvalReport& report);
std::string predictions_tsv(const EvalReport& report);

}  // namespace topicembed
