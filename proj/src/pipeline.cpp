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

#include "topicembed/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "topicembed/hybrid.hpp"

namespace topicembed {

namespace {

const std::map<std::string, Scheme>& scheme_table() {
  static const std::map<std::string, Scheme> table = {
      {"lda", Scheme::Lda},
      {"word2vec", Scheme::Word2vec},
      {"tfidf", Scheme::Tfidf},
      {"concat", Scheme::Concat},
      {"topic-vectors", Scheme::TopicVectors},
      {"topical", Scheme::Topical},
      {"topical+topic", Scheme::TopicalPlusTopic},
      {"topic-induced", Scheme::TopicInduced},
      {"topic-induced+topic", Scheme::TopicInducedPlusTopic},
  };
  return table;
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
  auto it = scheme_table().find(name);
  if (it == scheme_table().end())
    throw DomainError("unknown scheme: " + name);
  return it->second;
}

std::string scheme_name(Scheme scheme) {
  for (const auto& [name, s] : scheme_table())
    if (s == scheme) return name;
  return "?";
}

const std::vector<std::string>& all_scheme_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, s] : scheme_table()) out.push_back(name);
    return out;
  }();
  return names;
}

bool scheme_needs_lda(Scheme scheme) {
  switch (scheme) {
    case Scheme::Word2vec:
    case Scheme::Tfidf:
    case Scheme::Topical:
    case Scheme::TopicInduced:
      return false;
    default:
      return true;
  }
}

bool scheme_needs_embedding(Scheme scheme) {
  return scheme != Scheme::Lda && scheme != Scheme::Tfidf;
}

bool scheme_needs_topic_rows(Scheme scheme) {
  return scheme == Scheme::TopicalPlusTopic ||
         scheme == Scheme::TopicInducedPlusTopic;
}

FeatureMatrix featurize_documents(const std::vector<Document>& docs,
                                  Scheme scheme, const LdaModel* lda,
                                  const EmbeddingModel* embedding,
                                  const EvalOptions& opts) {
  if (scheme == Scheme::Tfidf)
    throw DomainError(
        "tfidf features need a train/test split; use tfidf_features or "
        "run_evaluation");
  if (scheme_needs_lda(scheme) && !lda)
    throw DomainError("scheme " + scheme_name(scheme) + " needs an LDA model");
  if (scheme_needs_embedding(scheme) && !embedding)
    throw DomainError("scheme " + scheme_name(scheme) + " needs an embedding model");
  if (scheme_needs_topic_rows(scheme) && embedding->row_of(topic_symbol(1)) < 0)
    throw DomainError("scheme " + scheme_name(scheme) +
                      " needs an embedding with topic rows (topical or "
                      "topic-induced model)");

  std::string id = scheme_name(scheme);
  if (lda) id += ":lda=" + hash_hex(lda->content_hash());
  if (embedding) id += ":emb=" + hash_hex(embedding->content_hash());
  if (opts.normalized_divisor && scheme == Scheme::TopicVectors) id += ":div=sum";

  TopicVectorSet topic_vectors;
  if (scheme == Scheme::TopicVectors)
    topic_vectors = build_topic_vectors(*lda, *embedding, opts.normalized_divisor);

  FeatureMatrix m;
  m.featurizer_id = id;
  std::vector<Eigen::VectorXd> rows;
  rows.reserve(docs.size());

  for (const auto& doc : docs) {
    bool empty = false;
    bool low_confidence = false;
    Eigen::VectorXd v;
    switch (scheme) {
      case Scheme::Lda:
        v = lda_features(doc, *lda, &low_confidence);
        break;
      case Scheme::Word2vec:
      case Scheme::Topical:
      case Scheme::TopicInduced:
        v = avg_word2vec(doc, *embedding, &empty);
        break;
      case Scheme::Concat: {
        v = concat_lda_word2vec(doc, *lda, *embedding);
        empty = doc.tokens.empty();
        break;
      }
      case Scheme::TopicVectors: {
        const TopicDistribution dist = infer_theta(*lda, doc);
        low_confidence = dist.low_confidence;
        v = avg_topic_vector(dist, topic_vectors, opts.normalized_divisor);
        break;
      }
      case Scheme::TopicalPlusTopic:
      case Scheme::TopicInducedPlusTopic:
        v = concat_topic_embedding(doc, *lda, *embedding);
        empty = doc.tokens.empty();
        break;
      case Scheme::Tfidf:
        break;  // unreachable
    }
    std::uint8_t flag = 0;
    if (empty) flag |= kFlagEmptyDocument;
    if (low_confidence) flag |= kFlagLowConfidence;
    m.flags.push_back(flag);
    m.doc_ids.push_back(doc.doc_id);
    m.labels.push_back(doc.label.value_or(-1));
    m.groups.push_back(doc.group_id);
    rows.push_back(std::move(v));
  }

  m.rows.resize(static_cast<Eigen::Index>(rows.size()),
                rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    m.rows.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  m.finalize();
  return m;
}

namespace {

FeatureMatrix slice_features(const FeatureMatrix& all,
                             const std::vector<int>& indices) {
  FeatureMatrix out;
  out.featurizer_id = all.featurizer_id;
  out.rows.resize(static_cast<Eigen::Index>(indices.size()), all.rows.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.rows.row(static_cast<Eigen::Index>(i)) = all.rows.row(indices[i]);
    out.doc_ids.push_back(all.doc_ids[indices[i]]);
    out.labels.push_back(all.labels[indices[i]]);
    out.groups.push_back(all.groups[indices[i]]);
    out.flags.push_back(all.flags[indices[i]]);
  }
  out.finalize();
  return out;
}

FeatureMatrix tfidf_fold_matrix(const TfidfModel& model,
                                const std::vector<Document>& docs,
                                const std::string& id) {
  FeatureMatrix m;
  m.featurizer_id = id;
  m.rows.resize(static_cast<Eigen::Index>(docs.size()), model.idf.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    m.rows.row(static_cast<Eigen::Index>(i)) =
        tfidf_vector(model, docs[i]).transpose();
    m.doc_ids.push_back(docs[i].doc_id);
    m.labels.push_back(docs[i].label.value_or(-1));
    m.groups.push_back(docs[i].group_id);
    m.flags.push_back(docs[i].tokens.empty() ? kFlagEmptyDocument : 0);
  }
  m.finalize();
  return m;
}

}  // namespace

EvalReport run_evaluation(const Corpus& corpus, const LdaModel* lda,
                          const EmbeddingModel* embedding,
                          const EvalOptions& opts) {
  const auto& docs = corpus.documents;
  for (const auto& doc : docs)
    if (!doc.label || (*doc.label != 0 && *doc.label != 1))
      throw DomainError("run_evaluation: unlabeled corpus (document " +
                        doc.doc_id + ")");

  const FoldPlan plan =
      group_kfold(docs, opts.folds, derive_seed(opts.seed, "folds"));

  // Fold-independent schemes featurize once; every vector is a pure function
  // of (document, models).
  FeatureMatrix all_features;
  if (opts.scheme != Scheme::Tfidf)
    all_features = featurize_documents(docs, opts.scheme, lda, embedding, opts);

  EvalReport report;
  report.scheme = scheme_name(opts.scheme);
  report.fold_table = fold_table_tsv(plan, docs);
  report.leakage_guard_ok = true;

  int total_test = 0;
  for (int fold = 0; fold < opts.folds; ++fold) {
    std::vector<int> train_idx, test_idx;
    for (std::size_t i = 0; i < docs.size(); ++i)
      (plan.fold_of[i] == fold ? test_idx : train_idx).push_back(static_cast<int>(i));
    if (test_idx.empty())
      throw DomainError("run_evaluation: empty fold " + std::to_string(fold));

    FeatureMatrix train, test;
    std::vector<const Provenance*> artifacts;
    TfidfModel tfidf;
    if (opts.scheme == Scheme::Tfidf) {
      std::vector<Document> train_docs, test_docs;
      for (int i : train_idx) train_docs.push_back(docs[i]);
      for (int i : test_idx) test_docs.push_back(docs[i]);
      tfidf = fit_tfidf(train_docs, opts.tfidf_top_n);
      const std::string id =
          "tfidf:top=" + std::to_string(opts.tfidf_top_n) + ":fold=" +
          std::to_string(fold);
      train = tfidf_fold_matrix(tfidf, train_docs, id);
      test = tfidf_fold_matrix(tfidf, test_docs, id);
      artifacts.push_back(&tfidf.prov);
    } else {
      train = slice_features(all_features, train_idx);
      test = slice_features(all_features, test_idx);
    }

    PcaTransform pca;
    if (opts.pca_drop_first) {
      pca = fit_pca_drop_first(train);
      train = apply_pca(pca, train);
      test = apply_pca(pca, test);
      artifacts.push_back(&pca.prov);
    }

    const LinearModel clf = train_linear(train, train.labels, opts.classifier,
                                         opts.tolerance, opts.c_reg);
    artifacts.push_back(&clf.prov);

    // train-fitted artifacts must be disjoint from this fold's test split
    const std::vector<std::uint64_t> test_hashes = test.sorted_doc_hashes();
    for (const Provenance* prov : artifacts) {
      ++report.leakage_artifacts_checked;
      if (!prov->disjoint_from(test_hashes)) {
        report.leakage_guard_ok = false;
        throw DomainError("run_evaluation: leakage guard tripped in fold " +
                          std::to_string(fold));
      }
    }

    const std::vector<int> predicted = predict(clf, test);
    const auto [micro, macro] = f1_scores(test.labels, predicted);
    report.per_fold.push_back(
        {fold, micro, macro, static_cast<int>(test_idx.size())});
    total_test += static_cast<int>(test_idx.size());
    for (std::size_t i = 0; i < test_idx.size(); ++i)
      report.predictions.push_back(
          {test.doc_ids[i], fold, test.labels[i], predicted[i]});

    if (fold == 0) report.feature_dim = static_cast<int>(train.rows.cols());
  }

  if (total_test != static_cast<int>(docs.size()))
    throw DomainError("run_evaluation: fold sizes do not cover the corpus");

  double micro_sum = 0.0, macro_sum = 0.0;
  for (const auto& f : report.per_fold) {
    micro_sum += f.f1_micro;
    macro_sum += f.f1_macro;
  }
  report.avg_f1_micro = micro_sum / report.per_fold.size();
  report.avg_f1_macro = macro_sum / report.per_fold.size();
  return report;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["scheme"] = report.scheme;
  j["feature_dim"] = report.feature_dim;
  j["averages"] = {{"f1_micro", report.avg_f1_micro},
                   {"f1_macro", report.avg_f1_macro}};
  j["folds"] = nlohmann::json::array();
  for (const auto& f : report.per_fold)
    j["folds"].push_back({{"fold", f.fold},
                          {"f1_micro", f.f1_micro},
                          {"f1_macro", f.f1_macro},
                          {"n_test", f.n_test}});
  j["predictions"] = nlohmann::json::array();
  for (const auto& p : report.predictions)
    j["predictions"].push_back({{"doc_id", p.doc_id},
                                {"fold", p.fold},
                                {"truth", p.truth},
                                {"predicted", p.predicted}});
  j["leakage_guard"] = {{"checked", true},
                        {"ok", report.leakage_guard_ok},
                        {"artifacts_checked", report.leakage_artifacts_checked}};
  j["config"] = report.config;
  return j;
}

std::string report_table_tsv(const EvalReport& report) {
  char micro[32], macro[32];
  std::snprintf(micro, sizeof(micro), "%.2f%%", 100.0 * report.avg_f1_micro);
  std::snprintf(macro, sizeof(macro), "%.2f%%", 100.0 * report.avg_f1_macro);
  std::ostringstream out;
  out << "\t" << report.scheme << '\n';
  out << "F1 micro\t" << micro << '\n';
  out << "F1 macro\t" << macro << '\n';
  return out.str();
}

std::string predictions_tsv(const EvalReport& report) {
  std::ostringstream out;
  out << "doc_id\tfold\ttruth\tpredicted\n";
  for (const auto& p : report.predictions)
    out << p.doc_id << '\t' << p.fold << '\t' << p.truth << '\t' << p.predicted
        << '\n';
  return out.str();
}

}  // namespace topicembed
