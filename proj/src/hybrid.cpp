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

#include "topicembed/hybrid.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "topicembed/common.hpp"
#include "topicembed/rng.hpp"
#include "topicembed/sgns.hpp"

namespace topicembed {

std::string topic_symbol(int index) {
  return "topic_" + std::to_string(index);
}

std::optional<int> parse_topic_symbol(const std::string& symbol) {
  if (symbol.rfind("topic_", 0) != 0) return std::nullopt;
  const std::string digits = symbol.substr(6);
  if (digits.empty() ||
      digits.find_first_not_of("0123456789") != std::string::npos)
    return std::nullopt;
  return std::stoi(digits);
}

Eigen::VectorXd topic_vector(const Eigen::VectorXd& phi_row,
                             const std::vector<std::string>& vocab,
                             const EmbeddingModel& embeddings,
                             bool normalized_divisor) {
  const auto v = phi_row.size();
  if (v == 0) throw DomainError("topic_vector: empty vocabulary");
  if (static_cast<std::size_t>(v) != vocab.size())
    throw DomainError("topic_vector: phi row and vocabulary size differ");

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(embeddings.dim);
  for (Eigen::Index i = 0; i < v; ++i) {
    if (phi_row(i) == 0.0) continue;
    sum += phi_row(i) * embeddings.lookup(vocab[i]);
  }
  const double divisor =
      normalized_divisor ? phi_row.sum() : static_cast<double>(v);
  return sum / divisor;
}

TopicVectorSet build_topic_vectors(const LdaModel& lda,
                                   const EmbeddingModel& embeddings,
                                   bool normalized_divisor) {
  const Eigen::MatrixXd phi = topic_word_distribution(lda);
  TopicVectorSet set;
  set.vectors.resize(lda.K, embeddings.dim);
  for (int k = 0; k < lda.K; ++k)
    set.vectors.row(k) =
        topic_vector(phi.row(k).transpose(), lda.vocab, embeddings,
                     normalized_divisor)
            .transpose();
  set.source_lda = lda.content_hash();
  set.source_embedding = embeddings.content_hash();
  return set;
}

Eigen::VectorXd avg_topic_vector(const TopicDistribution& theta,
                                 const TopicVectorSet& topic_vectors,
                                 bool normalized_divisor) {
  const auto k = topic_vectors.vectors.rows();
  if (theta.theta.size() != k)
    throw DomainError("avg_topic_vector: theta length does not match K");
  Eigen::VectorXd sum = topic_vectors.vectors.transpose() * theta.theta;
  const double divisor =
      normalized_divisor ? theta.theta.sum() : static_cast<double>(k);
  return sum / divisor;
}

EmbeddingModel train_topical_embedding(const Corpus& corpus, const LdaModel& lda,
                                       const SkipGramConfig& config) {
  const SgnsStream stream = make_sgns_stream(corpus.documents, config.min_count);

  // P(topic | word) rows aligned to the stream's symbol table
  const Eigen::MatrixXd ptw = topic_given_word(lda);
  Eigen::MatrixXd mixtures(stream.symbols.size(), lda.K);
  std::vector<std::string> unmapped;
  for (std::size_t r = 0; r < stream.symbols.size(); ++r) {
    const int col = lda.col_of(stream.symbols[r]);
    if (col < 0) {
      unmapped.push_back(stream.symbols[r]);
      continue;
    }
    mixtures.row(r) = ptw.row(col);
  }
  if (!unmapped.empty()) {
    std::string msg = "train_topical_embedding: words missing from the LDA vocabulary:";
    for (const auto& w : unmapped) msg += " " + w;
    throw DomainError(msg);
  }

  std::vector<std::string> topic_names;
  topic_names.reserve(lda.K);
  for (int k = 1; k <= lda.K; ++k) topic_names.push_back(topic_symbol(k));

  return train_sgns(stream, &mixtures, topic_names, config);
}

AugmentedCorpus induce_topics(const Corpus& corpus, const LdaModel& lda,
                              double p_replace, double threshold,
                              int repetitions, std::uint64_t seed) {
  if (p_replace < 0.0 || p_replace > 1.0 || threshold < 0.0 || threshold > 1.0)
    throw DomainError("induce_topics: probabilities must lie in [0, 1]");
  if (repetitions < 1)
    throw DomainError("induce_topics: repetitions must be >= 1");

  const Eigen::MatrixXd ptw = topic_given_word(lda);

  // per-word replacement symbol, resolved once
  std::vector<std::string> symbol_of_col(lda.vocab_size);
  const std::string sunk = topic_symbol(lda.K + 1);
  for (int w = 0; w < lda.vocab_size; ++w) {
    Eigen::Index best = 0;
    const double max_p = ptw.row(w).maxCoeff(&best);  // first max = lowest index
    symbol_of_col[w] =
        (w != lda.unk_col && max_p >= threshold)
            ? topic_symbol(static_cast<int>(best) + 1)
            : sunk;
  }

  AugmentedCorpus augmented;
  augmented.repetitions = repetitions;
  augmented.rng_seed = seed;
  augmented.n_topics = lda.K;
  augmented.documents.reserve(corpus.documents.size() * repetitions);

  for (int pass = 0; pass < repetitions; ++pass) {
    Rng rng(derive_seed(seed, "induce.pass." + std::to_string(pass)));
    for (const auto& doc : corpus.documents) {
      Document out;
      out.group_id = doc.group_id;
      out.label = doc.label;
      out.doc_id = doc.doc_id + "#r" + std::to_string(pass);
      out.tokens.reserve(doc.tokens.size());
      for (const auto& token : doc.tokens) {
        if (rng.uniform01() >= p_replace) {
          out.tokens.push_back(token);
          continue;
        }
        const int col = lda.col_of(token);
        out.tokens.push_back(col < 0 ? sunk : symbol_of_col[col]);
      }
      augmented.documents.push_back(std::move(out));
    }
  }
  return augmented;
}

EmbeddingModel train_topic_induced(const AugmentedCorpus& augmented,
                                   const SkipGramConfig& config) {
  if (augmented.documents.empty())
    throw DomainError("train_topic_induced: empty augmented corpus");
  const SgnsStream stream =
      make_sgns_stream(augmented.documents, config.min_count);
  return train_sgns(stream, nullptr, {}, config);
}

SkipGramConfig topic_induced_defaults() {
  SkipGramConfig config;
  config.dim = 400;  // the augmented stream is repetitions x larger
  return config;
}

Eigen::VectorXd most_prevalent_topic_vector(const Document& doc,
                                            const LdaModel& lda,
                                            const EmbeddingModel& model) {
  const TopicDistribution dist = infer_theta(lda, doc);
  Eigen::Index best = 0;
  dist.theta.maxCoeff(&best);  // ties resolve to the lowest index
  const std::string symbol = topic_symbol(static_cast<int>(best) + 1);
  if (model.row_of(symbol) < 0)
    throw DomainError("most_prevalent_topic_vector: model has no row for " + symbol);
  return model.lookup(symbol);
}

void write_augmented_archive(const AugmentedCorpus& augmented,
                             const std::string& dir) {
  Corpus as_corpus;
  as_corpus.documents = augmented.documents;
  as_corpus.vocabulary = build_vocabulary(augmented.documents, 1);
  as_corpus.stop_list_version = "augmented";
  as_corpus.min_count = 1;
  write_corpus_archive(as_corpus, dir);

  nlohmann::json extra;
  extra["repetitions"] = augmented.repetitions;
  extra["rng_seed"] = augmented.rng_seed;
  extra["n_topics"] = augmented.n_topics;
  std::ofstream out(std::filesystem::path(dir) / "augmented.json");
  out << extra.dump(2) << '\n';
}

AugmentedCorpus read_augmented_archive(const std::string& dir) {
  const Corpus as_corpus = read_corpus_archive(dir);
  std::ifstream in(std::filesystem::path(dir) / "augmented.json");
  if (!in) throw IoError("not an augmented archive (missing augmented.json): " + dir);
  const nlohmann::json extra = nlohmann::json::parse(in);

  AugmentedCorpus augmented;
  augmented.documents = as_corpus.documents;
  augmented.repetitions = extra.value("repetitions", 1);
  augmented.rng_seed = extra.value("rng_seed", 0ull);
  augmented.n_topics = extra.value("n_topics", 0);
  return augmented;
}

}  // namespace topicembed
