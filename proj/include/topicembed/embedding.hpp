// topicembed/embedding.hpp
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

struct SkipGramConfig {
  int dim = 300;
  int window = 2;
  int iterations = 100;       // full passes over the corpus
  int negative_samples = 5;
  int min_count = 2;
  double lr_start = 0.025;    // linear decay over all pair updates
  double lr_end = 0.0001;
  std::uint64_t seed = 42;
  int threads = 1;  // > 1: hogwild shards, no determinism guarantee

  std::uint64_t hash() const;
};

class EmbeddingModel {
 public:
  int dim = 0;
  std::vector<std::string> symbols;     // row -> symbol
  std::vector<double> input_vectors;    // rows x dim, row-major
  std::vector<double> output_vectors;   // rows x dim, row-major
  int unk_row = -1;                     // -1 for imported models without UNK
  int n_topic_rows = 0;                 // trailing rows holding topic symbols
  SkipGramConfig config;
  double first_pass_loss = 0.0;         // mean per-pair loss, first pass
  double last_pass_loss = 0.0;

  int rows() const { return static_cast<int>(symbols.size()); }
  int row_of(const std::string& symbol) const;

  const double* input_row(int r) const { return input_vectors.data() + static_cast<std::size_t>(r) * dim; }
  const double* output_row(int r) const { return output_vectors.data() + static_cast<std::size_t>(r) * dim; }
  double* input_row(int r) { return input_vectors.data() + static_cast<std::size_t>(r) * dim; }
  double* output_row(int r) { return output_vectors.data() + static_cast<std::size_t>(r) * dim; }

  // input vector, UNK row when absent, zeros when the model has no UNK row
  Eigen::VectorXd lookup(const std::string& symbol) const;

  const std::unordered_map<std::string, int>& symbol_index() const {
    return symbol_index_;
  }

  std::uint64_t content_hash() const;
  void rebuild_index();

 private:
  std::unordered_map<std::string, int> symbol_index_;
};

EmbeddingModel train_skipgram(const Corpus& corpus, const SkipGramConfig& config);

// top-k rows by cosine similarity, the query itself excluded, ties broken by
// symbol lexicographic order
std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingModel& model, const std::string& symbol, int k);

// Text vector format: header "R N", then "symbol v1 ... vN" per row.
// Values round-trip bitwise at float32 precision. Imports keep file order
// and cap at the first 1,000,000 rows.
EmbeddingModel import_embeddings(const std::string& path);
void export_embeddings(const EmbeddingModel& model, const std::string& path);

// binary container mirroring the LDA model layout
void save_embedding(const EmbeddingModel& model, const std::string& path);
EmbeddingModel load_embedding(const std::string& path);

// PCA projection of the selected rows onto the top-2 principal components
std::vector<std::tuple<std::string, double, double>> project_2d(
    const EmbeddingModel& model, const std::vector<std::string>& symbols);

}  // namespace topicembed
