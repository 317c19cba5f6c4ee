// topicembed/features.hpp
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
#include <string>
#include <unordered_map>
#include <vector>

#include "topicembed/common.hpp"
#include "topicembed/embedding.hpp"
#include "topicembed/hybrid.hpp"
#include "topicembed/lda.hpp"

namespace topicembed {

inline constexpr std::uint8_t kFlagEmptyDocument = 1;
inline constexpr std::uint8_t kFlagLowConfidence = 2;

struct FeatureMatrix {
  Eigen::MatrixXd rows;  // one document per row
  std::string featurizer_id;
  int dim = 0;
  std::vector<std::string> doc_ids;
  std::unordered_map<std::string, int> doc_index;
  std::vector<int> labels;           // -1 when unlabeled
  std::vector<std::string> groups;
  std::vector<std::uint8_t> flags;

  void finalize();  // dim, doc_index, invariant checks
  std::vector<std::uint64_t> sorted_doc_hashes() const;
};

// Eq-style document mean of embedding rows; empty documents yield a zero
// vector and are flagged.
Eigen::VectorXd avg_word2vec(const Document& doc, const EmbeddingModel& model,
                             bool* empty_flag = nullptr);

// alias for the inferred topic distribution
Eigen::VectorXd lda_features(const Document& doc, const LdaModel& lda,
                             bool* low_confidence = nullptr);

struct TfidfModel {
  std::vector<std::string> words;  // top-N train words by frequency
  std::unordered_map<std::string, int> index;
  Eigen::VectorXd idf;  // ln((1+D)/(1+df)) + 1
  int fitted_top_n = 0;
  Provenance prov;
};

TfidfModel fit_tfidf(const std::vector<Document>& train_docs, int top_n);
// raw term counts x idf, L2-normalized
Eigen::VectorXd tfidf_vector(const TfidfModel& model, const Document& doc);

std::pair<FeatureMatrix, FeatureMatrix> tfidf_features(
    const std::vector<Document>& train_docs,
    const std::vector<Document>& test_docs, int top_n = 1000);

// [avg_word2vec ; theta], N + K dims
Eigen::VectorXd concat_lda_word2vec(const Document& doc, const LdaModel& lda,
                                    const EmbeddingModel& model);

// [avg_word2vec ; most prevalent topic's row], 2N dims
Eigen::VectorXd concat_topic_embedding(const Document& doc, const LdaModel& lda,
                                       const EmbeddingModel& model);

struct PcaTransform {
  Eigen::VectorXd mean;        // d
  Eigen::MatrixXd components;  // (d-1) x d, orthonormal, first PC dropped
  Provenance prov;

  int in_dim() const { return static_cast<int>(components.cols()); }
  int out_dim() const { return static_cast<int>(components.rows()); }
};

PcaTransform fit_pca_drop_first(const FeatureMatrix& train);
FeatureMatrix apply_pca(const PcaTransform& transform, const FeatureMatrix& m);

// TSV: doc_id, label, group, v1..vd
void write_feature_tsv(const FeatureMatrix& m, const std::string& path);
void write_feature_bin(const FeatureMatrix& m, const std::string& path);
FeatureMatrix read_feature_bin(const std::string& path);

}  // namespace topicembed
