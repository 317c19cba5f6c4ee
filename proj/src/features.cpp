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

#include "topicembed/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>

#include "topicembed/mathutil.hpp"

namespace topicembed {

namespace {
constexpr char kFeatMagic[8] = {'T', 'E', 'F', 'E', 'A', 'T', '0', '1'};
}

void FeatureMatrix::finalize() {
  dim = static_cast<int>(rows.cols());
  doc_index.clear();
  for (std::size_t i = 0; i < doc_ids.size(); ++i)
    doc_index.emplace(doc_ids[i], static_cast<int>(i));
  if (static_cast<Eigen::Index>(doc_ids.size()) != rows.rows())
    throw DomainError("FeatureMatrix: row/id count mismatch");
  if (!rows.allFinite())
    throw DomainError("FeatureMatrix: non-finite feature value");
}

std::vector<std::uint64_t> FeatureMatrix::sorted_doc_hashes() const {
  std::vector<std::uint64_t> hashes;
  hashes.reserve(doc_ids.size());
  for (const auto& id : doc_ids) hashes.push_back(doc_id_hash(id));
  std::sort(hashes.begin(), hashes.end());
  return hashes;
}

Eigen::VectorXd avg_word2vec(const Document& doc, const EmbeddingModel& model,
                             bool* empty_flag) {
  if (empty_flag) *empty_flag = doc.tokens.empty();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(model.dim);
  if (doc.tokens.empty()) return sum;
  for (const auto& token : doc.tokens) sum += model.lookup(token);
  return sum / static_cast<double>(doc.tokens.size());
}

Eigen::VectorXd lda_features(const Document& doc, const LdaModel& lda,
                             bool* low_confidence) {
  const TopicDistribution dist = infer_theta(lda, doc);
  if (low_confidence) *low_confidence = dist.low_confidence;
  return dist.theta;
}

TfidfModel fit_tfidf(const std::vector<Document>& train_docs, int top_n) {
  if (top_n < 1) throw DomainError("fit_tfidf: top_n must be >= 1");
  std::map<std::string, std::int64_t> term_freq;
  std::map<std::string, std::int64_t> doc_freq;
  for (const auto& doc : train_docs) {
    std::map<std::string, std::int64_t> in_doc;
    for (const auto& token : doc.tokens) {
      ++term_freq[token];
      ++in_doc[token];
    }
    for (const auto& [word, unused] : in_doc) ++doc_freq[word];
  }

  std::vector<std::pair<std::string, std::int64_t>> ranked(term_freq.begin(),
                                                           term_freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(ranked.size()) > top_n) {
    ranked.resize(top_n);
  } else if (static_cast<int>(ranked.size()) < top_n) {
    std::cerr << "fit_tfidf: only " << ranked.size()
              << " distinct train words for top_n=" << top_n << "\n";
  }

  TfidfModel model;
  model.fitted_top_n = top_n;
  const double d_docs = static_cast<double>(train_docs.size());
  model.idf.resize(static_cast<Eigen::Index>(ranked.size()));
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    model.index.emplace(ranked[i].first, static_cast<int>(i));
    model.words.push_back(ranked[i].first);
    const double df = static_cast<double>(doc_freq[ranked[i].first]);
    model.idf(static_cast<Eigen::Index>(i)) =
        std::log((1.0 + d_docs) / (1.0 + df)) + 1.0;
  }

  std::vector<std::string> ids;
  for (const auto& doc : train_docs) ids.push_back(doc.doc_id);
  model.prov.set_from_ids(ids);
  return model;
}

Eigen::VectorXd tfidf_vector(const TfidfModel& model, const Document& doc) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(model.idf.size());
  for (const auto& token : doc.tokens) {
    auto it = model.index.find(token);
    if (it != model.index.end()) v(it->second) += 1.0;
  }
  v = v.cwiseProduct(model.idf);
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

namespace {

FeatureMatrix tfidf_matrix(const TfidfModel& model,
                           const std::vector<Document>& docs,
                           const std::string& featurizer_id) {
  FeatureMatrix m;
  m.featurizer_id = featurizer_id;
  m.rows.resize(static_cast<Eigen::Index>(docs.size()), model.idf.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    m.rows.row(static_cast<Eigen::Index>(i)) = tfidf_vector(model, docs[i]).transpose();
    m.doc_ids.push_back(docs[i].doc_id);
    m.labels.push_back(docs[i].label.value_or(-1));
    m.groups.push_back(docs[i].group_id);
    m.flags.push_back(docs[i].tokens.empty() ? kFlagEmptyDocument : 0);
  }
  m.finalize();
  return m;
}

}  // namespace

std::pair<FeatureMatrix, FeatureMatrix> tfidf_features(
    const std::vector<Document>& train_docs,
    const std::vector<Document>& test_docs, int top_n) {
  const TfidfModel model = fit_tfidf(train_docs, top_n);
  std::uint64_t fit_hash = kFnvOffset;
  for (std::uint64_t h : model.prov.fit_doc_hashes)
    fit_hash = fnv1a64_bytes(&h, sizeof(h), fit_hash);
  const std::string id = "tfidf:top=" + std::to_string(top_n) +
                         ":fit=" + hash_hex(fit_hash);
  return {tfidf_matrix(model, train_docs, id),
          tfidf_matrix(model, test_docs, id)};
}

Eigen::VectorXd concat_lda_word2vec(const Document& doc, const LdaModel& lda,
                                    const EmbeddingModel& model) {
  const Eigen::VectorXd w2v = avg_word2vec(doc, model);
  const Eigen::VectorXd theta = lda_features(doc, lda);
  Eigen::VectorXd out(w2v.size() + theta.size());
  out << w2v, theta;
  return out;
}

Eigen::VectorXd concat_topic_embedding(const Document& doc, const LdaModel& lda,
                                       const EmbeddingModel& model) {
  const Eigen::VectorXd w2v = avg_word2vec(doc, model);
  const Eigen::VectorXd topic = most_prevalent_topic_vector(doc, lda, model);
  Eigen::VectorXd out(w2v.size() + topic.size());
  out << w2v, topic;
  return out;
}

PcaTransform fit_pca_drop_first(const FeatureMatrix& train) {
  if (train.rows.rows() < 3)
    throw DomainError("fit_pca_drop_first: need at least 3 training rows");

  const PcaResult pca = pca_fit(train.rows);
  if (pca.eigenvalues.sum() < 1e-12)
    throw DomainError("fit_pca_drop_first: zero-variance input");

  PcaTransform t;
  t.mean = pca.mean;
  t.components = pca.components.bottomRows(pca.components.rows() - 1);
  t.prov.fit_doc_hashes = train.sorted_doc_hashes();
  return t;
}

FeatureMatrix apply_pca(const PcaTransform& transform, const FeatureMatrix& m) {
  if (m.rows.cols() != transform.components.cols())
    throw DomainError("apply_pca: dimension mismatch");
  FeatureMatrix out = m;
  out.rows = (m.rows.rowwise() - transform.mean.transpose()) *
             transform.components.transpose();
  out.featurizer_id = m.featurizer_id + "+pca_drop_first";
  out.finalize();
  return out;
}

void write_feature_tsv(const FeatureMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "doc_id\tlabel\tgroup";
  for (int j = 1; j <= m.dim; ++j) out << "\tv" << j;
  out << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows.rows(); ++i) {
    out << m.doc_ids[i] << '\t' << m.labels[i] << '\t' << m.groups[i];
    for (Eigen::Index j = 0; j < m.rows.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.rows(i, j));
      out << '\t' << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure: " + path);
}

void write_feature_bin(const FeatureMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kFeatMagic, sizeof(kFeatMagic));
  auto put_u64 = [&](std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), 8);
  };
  auto put_str = [&](const std::string& s) {
    const auto len = static_cast<std::uint32_t>(s.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(s.data(), len);
  };
  put_u64(static_cast<std::uint64_t>(m.rows.rows()));
  put_u64(static_cast<std::uint64_t>(m.rows.cols()));
  put_str(m.featurizer_id);
  for (Eigen::Index i = 0; i < m.rows.rows(); ++i) {
    put_str(m.doc_ids[i]);
    put_str(m.groups[i]);
    const std::int64_t label = m.labels[i];
    out.write(reinterpret_cast<const char*>(&label), 8);
    out.write(reinterpret_cast<const char*>(&m.flags[i]), 1);
    for (Eigen::Index j = 0; j < m.rows.cols(); ++j) {
      const double v = m.rows(i, j);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
  }
  if (!out) throw IoError("write failure: " + path);
}

FeatureMatrix read_feature_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kFeatMagic, 8) != 0)
    throw IoError("not a feature container: " + path);
  auto get_u64 = [&] {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  auto get_str = [&] {
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 4);
    std::string s(len, '\0');
    in.read(s.data(), len);
    return s;
  };
  FeatureMatrix m;
  const auto n = static_cast<Eigen::Index>(get_u64());
  const auto d = static_cast<Eigen::Index>(get_u64());
  m.featurizer_id = get_str();
  m.rows.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    m.doc_ids.push_back(get_str());
    m.groups.push_back(get_str());
    std::int64_t label = -1;
    in.read(reinterpret_cast<char*>(&label), 8);
    m.labels.push_back(static_cast<int>(label));
    std::uint8_t flag = 0;
    in.read(reinterpret_cast<char*>(&flag), 1);
    m.flags.push_back(flag);
    for (Eigen::Index j = 0; j < d; ++j) {
      double v = 0;
      in.read(reinterpret_cast<char*>(&v), 8);
      m.rows(i, j) = v;
    }
  }
  if (!in) throw IoError("truncated feature container: " + path);
  m.finalize();
  return m;
}

}  // namespace topicembed
