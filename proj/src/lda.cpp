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

#include "topicembed/lda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "topicembed/common.hpp"
#include "topicembed/mathutil.hpp"
#include "topicembed/rng.hpp"

namespace topicembed {

namespace {

constexpr char kLdaMagic[8] = {'T', 'E', 'L', 'D', 'A', 'M', '0', '1'};
constexpr double kPhiFloor = 1e-100;

// (word col, count) pairs sorted by column
std::vector<std::pair<int, double>> bag_of_words(const std::vector<int>& ids,
                                                 int skip_col) {
  std::map<int, double> counts;
  for (int id : ids)
    if (id != skip_col) counts[id] += 1.0;
  return {counts.begin(), counts.end()};
}

struct EStepResult {
  Eigen::VectorXd gamma;         // K
  Eigen::VectorXd exp_elog_theta;  // K, consistent with gamma
  Eigen::VectorXd phinorm;       // one entry per unique word
};

// Fixed-point iteration on gamma for one document. elogbeta_doc holds the
// Elogbeta columns of the document's unique words (K x n).
EStepResult doc_e_step(const Eigen::VectorXd& alpha,
                       const Eigen::MatrixXd& elogbeta_doc,
                       const Eigen::VectorXd& cts, int max_iters, double tol) {
  const auto K = alpha.size();
  const double n_tokens = cts.sum();

  EStepResult r;
  r.gamma = alpha.array() + n_tokens / static_cast<double>(K);
  Eigen::VectorXd elog_theta = dirichlet_expectation(r.gamma);
  r.exp_elog_theta = elog_theta.array().exp();
  Eigen::MatrixXd exp_elogbeta_doc = elogbeta_doc.array().exp();
  r.phinorm = (exp_elogbeta_doc.transpose() * r.exp_elog_theta).array() + kPhiFloor;

  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd last_gamma = r.gamma;
    r.gamma = alpha.array() +
              (r.exp_elog_theta.array() *
               (exp_elogbeta_doc * (cts.array() / r.phinorm.array()).matrix()).array());
    elog_theta = dirichlet_expectation(r.gamma);
    r.exp_elog_theta = elog_theta.array().exp();
    r.phinorm = (exp_elogbeta_doc.transpose() * r.exp_elog_theta).array() + kPhiFloor;
    if ((r.gamma - last_gamma).cwiseAbs().mean() < tol) break;
  }
  return r;
}

}  // namespace

std::uint64_t LdaConfig::hash() const {
  std::ostringstream s;
  s << batch_size << '|' << kappa << '|' << tau0 << '|' << passes << '|'
    << alpha << '|' << eta << '|' << max_e_iters << '|' << e_tol << '|' << seed;
  return fnv1a64(s.str());
}

int LdaModel::col_of(const std::string& word) const {
  auto it = word_to_col_.find(word);
  return it == word_to_col_.end() ? -1 : it->second;
}

void LdaModel::rebuild_index() {
  word_to_col_.clear();
  word_to_col_.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i)
    word_to_col_.emplace(vocab[i], static_cast<int>(i));
}

std::uint64_t LdaModel::content_hash() const {
  std::uint64_t h = kFnvOffset;
  h = fnv1a64_bytes(&K, sizeof(K), h);
  h = fnv1a64_bytes(&vocab_size, sizeof(vocab_size), h);
  h = fnv1a64_bytes(&eta, sizeof(eta), h);
  h = fnv1a64_bytes(alpha.data(), sizeof(double) * alpha.size(), h);
  h = fnv1a64_bytes(lambda.data(), sizeof(double) * lambda.size(), h);
  for (const auto& w : vocab) h = fnv1a64(w, h);
  return h;
}

OnlineLdaTrainer::OnlineLdaTrainer(const Corpus& corpus, int K,
                                   const LdaConfig& config)
    : config_(config), K_(K) {
  if (corpus.documents.empty())
    throw DomainError("train_lda: empty corpus");
  if (K < 2) throw DomainError("train_lda: K must be >= 2");
  V_ = corpus.vocabulary.size();
  if (K > V_) throw DomainError("train_lda: K exceeds vocabulary size");

  vocab_ = corpus.vocabulary.word_of;
  unk_col_ = corpus.vocabulary.unk_id;
  alpha_sym_ = config.alpha > 0 ? config.alpha : 1.0 / K;
  eta_ = config.eta > 0 ? config.eta : 1.0 / K;

  for (const auto& doc : corpus.documents) {
    auto bag = bag_of_words(corpus.encode(doc), unk_col_);
    if (bag.empty()) {
      ++skipped_docs_;
      continue;
    }
    docs_.push_back(std::move(bag));
  }
  if (docs_.empty())
    throw DomainError("train_lda: no documents with in-vocabulary tokens");
  if (skipped_docs_ > 0)
    std::cerr << "train_lda: skipped " << skipped_docs_
              << " empty document(s)\n";

  Rng rng(derive_seed(config.seed, "lda.init"));
  lambda_.resize(K_, V_);
  for (int k = 0; k < K_; ++k)
    for (int w = 0; w < V_; ++w) lambda_(k, w) = rng.gamma(100.0, 0.01);
}

void OnlineLdaTrainer::update_batch(std::size_t begin, std::size_t end) {
  const auto batch_docs = static_cast<Eigen::Index>(end - begin);
  const double corpus_docs = static_cast<double>(docs_.size());
  const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(K_, alpha_sym_);

  const Eigen::MatrixXd elogbeta = dirichlet_expectation_rows(lambda_);
  const Eigen::MatrixXd exp_elogbeta = elogbeta.array().exp();

  std::vector<Eigen::VectorXd> gammas(batch_docs);
  const int n_threads = std::max(1, config_.threads);

  auto e_step_range = [&](std::size_t lo, std::size_t hi, Eigen::MatrixXd* sstats) {
    for (std::size_t d = lo; d < hi; ++d) {
      const auto& bag = docs_[begin + d];
      const auto n_unique = static_cast<Eigen::Index>(bag.size());
      Eigen::MatrixXd elogbeta_doc(K_, n_unique);
      Eigen::VectorXd cts(n_unique);
      for (Eigen::Index i = 0; i < n_unique; ++i) {
        elogbeta_doc.col(i) = elogbeta.col(bag[i].first);
        cts(i) = bag[i].second;
      }
      EStepResult r = doc_e_step(alpha, elogbeta_doc, cts,
                                 config_.max_e_iters, config_.e_tol);
      gammas[d] = r.gamma;
      for (Eigen::Index i = 0; i < n_unique; ++i)
        sstats->col(bag[i].first) += r.exp_elog_theta * (cts(i) / r.phinorm(i));
    }
  };

  Eigen::MatrixXd sstats = Eigen::MatrixXd::Zero(K_, V_);
  if (n_threads == 1 || batch_docs < 2 * n_threads) {
    e_step_range(0, batch_docs, &sstats);
  } else {
    // contiguous shards, merged in shard order behind the barrier
    std::vector<Eigen::MatrixXd> partial(
        n_threads, Eigen::MatrixXd::Zero(K_, V_));
    std::vector<std::thread> workers;
    const std::size_t chunk = (batch_docs + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const std::size_t lo = std::min<std::size_t>(t * chunk, batch_docs);
      const std::size_t hi = std::min<std::size_t>(lo + chunk, batch_docs);
      workers.emplace_back(e_step_range, lo, hi, &partial[t]);
    }
    for (auto& w : workers) w.join();
    for (const auto& p : partial) sstats += p;
  }

  sstats = sstats.cwiseProduct(exp_elogbeta);

  const double rhot = std::pow(config_.tau0 + static_cast<double>(update_count_),
                               -config_.kappa);
  lambda_ = (1.0 - rhot) * lambda_ +
            rhot * ((corpus_docs / static_cast<double>(batch_docs)) * sstats.array() +
                    eta_).matrix();
  ++update_count_;

  // per-batch variational bound estimate (Hoffman-style approximation)
  double score = 0.0;
  for (Eigen::Index d = 0; d < batch_docs; ++d) {
    const auto& bag = docs_[begin + d];
    const Eigen::VectorXd elog_theta = dirichlet_expectation(gammas[d]);
    for (const auto& [col, ct] : bag) {
      double max_term = -1e300;
      for (int k = 0; k < K_; ++k)
        max_term = std::max(max_term, elog_theta(k) + elogbeta(k, col));
      double sum = 0.0;
      for (int k = 0; k < K_; ++k)
        sum += std::exp(elog_theta(k) + elogbeta(k, col) - max_term);
      score += ct * (max_term + std::log(sum));
    }
    score += ((alpha - gammas[d]).array() * elog_theta.array()).sum();
    score += (gammas[d].unaryExpr([](double v) { return std::lgamma(v); }) -
              alpha.unaryExpr([](double v) { return std::lgamma(v); }))
                 .sum();
    score += std::lgamma(alpha.sum()) - std::lgamma(gammas[d].sum());
  }
  score *= corpus_docs / static_cast<double>(batch_docs);
  const Eigen::MatrixXd elogbeta_new = dirichlet_expectation_rows(lambda_);
  score += ((eta_ - lambda_.array()) * elogbeta_new.array()).sum();
  score += (lambda_.array().lgamma() - std::lgamma(eta_)).sum();
  for (int k = 0; k < K_; ++k)
    score += std::lgamma(eta_ * V_) - std::lgamma(lambda_.row(k).sum());
  batch_bounds_.push_back(score);
}

void OnlineLdaTrainer::run_pass() {
  const auto batch = static_cast<std::size_t>(config_.batch_size);
  for (std::size_t begin = 0; begin < docs_.size(); begin += batch)
    update_batch(begin, std::min(begin + batch, docs_.size()));
  ++passes_done_;
}

LdaModel OnlineLdaTrainer::model() const {
  LdaModel m;
  m.lambda = lambda_;
  m.alpha = Eigen::VectorXd::Constant(K_, alpha_sym_);
  m.eta = eta_;
  m.K = K_;
  m.vocab_size = V_;
  m.vocab = vocab_;
  m.unk_col = unk_col_;
  m.config_hash = config_.hash();
  m.max_e_iters = config_.max_e_iters;
  m.rebuild_index();
  return m;
}

LdaModel train_lda(const Corpus& corpus, int K, const LdaConfig& config) {
  OnlineLdaTrainer trainer(corpus, K, config);
  for (int p = 0; p < config.passes; ++p) trainer.run_pass();
  for (double b : trainer.batch_bounds())
    if (!std::isfinite(b))
      throw DomainError("train_lda: non-finite variational bound");
  return trainer.model();
}

TopicDistribution infer_theta(const LdaModel& model, const Document& doc) {
  TopicDistribution result;

  std::vector<int> ids;
  ids.reserve(doc.tokens.size());
  for (const auto& token : doc.tokens) {
    const int col = model.col_of(token);
    if (col >= 0) ids.push_back(col);
  }
  auto bag = bag_of_words(ids, model.unk_col);
  if (bag.empty()) {
    result.theta = model.alpha / model.alpha.sum();
    result.low_confidence = true;
    return result;
  }

  const Eigen::MatrixXd elogbeta = dirichlet_expectation_rows(model.lambda);
  const auto n_unique = static_cast<Eigen::Index>(bag.size());
  Eigen::MatrixXd elogbeta_doc(model.K, n_unique);
  Eigen::VectorXd cts(n_unique);
  for (Eigen::Index i = 0; i < n_unique; ++i) {
    elogbeta_doc.col(i) = elogbeta.col(bag[i].first);
    cts(i) = bag[i].second;
  }
  // tighter tolerance than training: featurization must be reproducible
  EStepResult r = doc_e_step(model.alpha, elogbeta_doc, cts,
                             model.max_e_iters, 1e-6 / model.K);
  result.theta = r.gamma / r.gamma.sum();
  return result;
}

Eigen::MatrixXd topic_word_distribution(const LdaModel& model) {
  Eigen::MatrixXd phi = model.lambda;
  for (int k = 0; k < model.K; ++k) phi.row(k) /= phi.row(k).sum();
  return phi;
}

Eigen::MatrixXd topic_given_word(const LdaModel& model,
                                 std::vector<int>* flagged) {
  const Eigen::MatrixXd phi = topic_word_distribution(model);
  Eigen::MatrixXd out(model.vocab_size, model.K);
  for (int w = 0; w < model.vocab_size; ++w) {
    const double mass = phi.col(w).sum();
    if (mass <= 0.0) {
      out.row(w).setConstant(1.0 / model.K);
      if (flagged) flagged->push_back(w);
    } else {
      out.row(w) = phi.col(w).transpose() / mass;
    }
  }
  return out;
}

double heldout_per_word_log_likelihood(const LdaModel& model,
                                       const std::vector<Document>& docs) {
  const Eigen::MatrixXd phi = topic_word_distribution(model);
  double total_ll = 0.0;
  double total_tokens = 0.0;
  for (const auto& doc : docs) {
    const TopicDistribution dist = infer_theta(model, doc);
    if (dist.low_confidence) continue;
    for (const auto& token : doc.tokens) {
      const int col = model.col_of(token);
      if (col < 0 || col == model.unk_col) continue;
      const double p = dist.theta.dot(phi.col(col));
      total_ll += std::log(std::max(p, 1e-300));
      total_tokens += 1.0;
    }
  }
  if (total_tokens == 0.0)
    throw DomainError("heldout log-likelihood: no in-vocabulary tokens");
  return total_ll / total_tokens;
}

void save_lda(const LdaModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kLdaMagic, sizeof(kLdaMagic));
  const std::uint64_t k = model.K, v = model.vocab_size;
  const std::int64_t unk = model.unk_col;
  out.write(reinterpret_cast<const char*>(&k), 8);
  out.write(reinterpret_cast<const char*>(&v), 8);
  out.write(reinterpret_cast<const char*>(&model.eta), 8);
  out.write(reinterpret_cast<const char*>(&model.config_hash), 8);
  out.write(reinterpret_cast<const char*>(&unk), 8);
  const std::uint64_t e_iters = model.max_e_iters;
  out.write(reinterpret_cast<const char*>(&e_iters), 8);
  out.write(reinterpret_cast<const char*>(model.alpha.data()), 8 * model.K);
  for (const auto& word : model.vocab) {
    const std::uint32_t len = static_cast<std::uint32_t>(word.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(word.data(), len);
  }
  // row-major float64, little-endian
  for (int kk = 0; kk < model.K; ++kk)
    for (int w = 0; w < model.vocab_size; ++w) {
      const double value = model.lambda(kk, w);
      out.write(reinterpret_cast<const char*>(&value), 8);
    }
  if (!out) throw IoError("write failure: " + path);
}

LdaModel load_lda(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kLdaMagic, 8) != 0)
    throw IoError("not an LDA model file: " + path);

  LdaModel model;
  std::uint64_t k = 0, v = 0, e_iters = 100;
  std::int64_t unk = -1;
  in.read(reinterpret_cast<char*>(&k), 8);
  in.read(reinterpret_cast<char*>(&v), 8);
  in.read(reinterpret_cast<char*>(&model.eta), 8);
  in.read(reinterpret_cast<char*>(&model.config_hash), 8);
  in.read(reinterpret_cast<char*>(&unk), 8);
  in.read(reinterpret_cast<char*>(&e_iters), 8);
  model.K = static_cast<int>(k);
  model.vocab_size = static_cast<int>(v);
  model.unk_col = static_cast<int>(unk);
  model.max_e_iters = static_cast<int>(e_iters);
  model.alpha.resize(model.K);
  in.read(reinterpret_cast<char*>(model.alpha.data()), 8 * model.K);
  model.vocab.resize(v);
  for (auto& word : model.vocab) {
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 4);
    word.resize(len);
    in.read(word.data(), len);
  }
  model.lambda.resize(model.K, model.vocab_size);
  for (int kk = 0; kk < model.K; ++kk)
    for (int w = 0; w < model.vocab_size; ++w) {
      double value;
      in.read(reinterpret_cast<char*>(&value), 8);
      model.lambda(kk, w) = value;
    }
  if (!in) throw IoError("truncated LDA model file: " + path);
  model.rebuild_index();
  return model;
}

std::string export_topics_tsv(const LdaModel& model, int top_n) {
  const Eigen::MatrixXd phi = topic_word_distribution(model);
  std::ostringstream out;
  out << "topic\trank\tword\tprobability\n";
  char buf[64];
  for (int k = 0; k < model.K; ++k) {
    std::vector<int> order(model.vocab_size);
    for (int w = 0; w < model.vocab_size; ++w) order[w] = w;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (phi(k, a) != phi(k, b)) return phi(k, a) > phi(k, b);
      return model.vocab[a] < model.vocab[b];
    });
    const int n = std::min(top_n, model.vocab_size);
    for (int r = 0; r < n; ++r) {
      std::snprintf(buf, sizeof(buf), "%.8g", phi(k, order[r]));
      out << k << '\t' << (r + 1) << '\t' << model.vocab[order[r]] << '\t'
          << buf << '\n';
    }
  }
  return out.str();
}

}  // namespace topicembed
