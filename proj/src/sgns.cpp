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

#include "topicembed/sgns.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <thread>

#include "topicembed/common.hpp"
#include "topicembed/mathutil.hpp"
#include "topicembed/rng.hpp"

namespace topicembed {

namespace {

constexpr double kNoisePower = 0.75;

inline double dot(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int j = 0; j < dim; ++j) s += a[j] * b[j];
  return s;
}

// v(w) = E_w + sum_t P(t|w) E_topic_t
void compose(const double* table, int dim, int row, const Eigen::MatrixXd* mix,
             int topic_base, double* out) {
  const double* base = table + static_cast<std::size_t>(row) * dim;
  std::copy(base, base + dim, out);
  if (!mix) return;
  for (Eigen::Index t = 0; t < mix->cols(); ++t) {
    const double m = (*mix)(row, t);
    if (m == 0.0) continue;
    const double* trow = table + static_cast<std::size_t>(topic_base + t) * dim;
    for (int j = 0; j < dim; ++j) out[j] += m * trow[j];
  }
}

// adds g * delta into a word row and its topic rows
void scatter(double* table, int dim, int row, const Eigen::MatrixXd* mix,
             int topic_base, const double* delta, double g) {
  double* base = table + static_cast<std::size_t>(row) * dim;
  for (int j = 0; j < dim; ++j) base[j] += g * delta[j];
  if (!mix) return;
  for (Eigen::Index t = 0; t < mix->cols(); ++t) {
    const double m = (*mix)(row, t);
    if (m == 0.0) continue;
    double* trow = table + static_cast<std::size_t>(topic_base + t) * dim;
    const double gm = g * m;
    for (int j = 0; j < dim; ++j) trow[j] += gm * delta[j];
  }
}

struct PairBuffers {
  std::vector<double> comp_in, comp_out, acc;
  std::vector<int> negatives;
};

// One SGD step on a (center, context) pair; returns the pair loss. Targets
// are processed sequentially with the input composite held fixed, word2vec
// style.
double train_pair(EmbeddingModel& m, const Eigen::MatrixXd* mix, int topic_base,
                  int center, int context, const AliasSampler& noise,
                  int n_negative, double lr, Rng& rng, PairBuffers& buf) {
  const int dim = m.dim;
  double* in = m.input_vectors.data();
  double* out = m.output_vectors.data();

  compose(in, dim, center, mix, topic_base, buf.comp_in.data());
  std::fill(buf.acc.begin(), buf.acc.end(), 0.0);

  buf.negatives.clear();
  for (int k = 0; k < n_negative; ++k) {
    const int neg = noise.draw(rng);
    if (neg == context) continue;  // keep the positive target clean
    buf.negatives.push_back(neg);
  }

  double loss = 0.0;
  auto step_target = [&](int target, double label) {
    compose(out, dim, target, mix, topic_base, buf.comp_out.data());
    const double f = dot(buf.comp_in.data(), buf.comp_out.data(), dim);
    loss -= label > 0.5 ? log_sigmoid(f) : log_sigmoid(-f);
    const double g = lr * (label - sigmoid(f));
    for (int j = 0; j < dim; ++j) buf.acc[j] += g * buf.comp_out[j];
    scatter(out, dim, target, mix, topic_base, buf.comp_in.data(), g);
  };

  step_target(context, 1.0);
  for (int neg : buf.negatives) step_target(neg, 0.0);

  scatter(in, dim, center, mix, topic_base, buf.acc.data(), 1.0);
  return loss;
}

std::int64_t count_window_pairs(const std::vector<std::vector<int>>& docs,
                                int window) {
  std::int64_t pairs = 0;
  for (const auto& doc : docs) {
    const auto len = static_cast<std::int64_t>(doc.size());
    for (std::int64_t i = 0; i < len; ++i) {
      const std::int64_t lo = std::max<std::int64_t>(0, i - window);
      const std::int64_t hi = std::min<std::int64_t>(len - 1, i + window);
      pairs += hi - lo;  // window minus the center itself
    }
  }
  return pairs;
}

}  // namespace

std::uint64_t SkipGramConfig::hash() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d|%d|%d|%d|%d|%.17g|%.17g|%llu", dim,
                window, iterations, negative_samples, min_count, lr_start,
                lr_end, static_cast<unsigned long long>(seed));
  return fnv1a64(buf);
}

int EmbeddingModel::row_of(const std::string& symbol) const {
  auto it = symbol_index_.find(symbol);
  return it == symbol_index_.end() ? -1 : it->second;
}

Eigen::VectorXd EmbeddingModel::lookup(const std::string& symbol) const {
  int r = row_of(symbol);
  if (r < 0) r = unk_row;
  if (r < 0) return Eigen::VectorXd::Zero(dim);
  return Eigen::Map<const Eigen::VectorXd>(input_row(r), dim);
}

void EmbeddingModel::rebuild_index() {
  symbol_index_.clear();
  symbol_index_.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i)
    symbol_index_.emplace(symbols[i], static_cast<int>(i));
}

std::uint64_t EmbeddingModel::content_hash() const {
  std::uint64_t h = kFnvOffset;
  h = fnv1a64_bytes(&dim, sizeof(dim), h);
  for (const auto& s : symbols) h = fnv1a64(s, h);
  h = fnv1a64_bytes(input_vectors.data(), sizeof(double) * input_vectors.size(), h);
  h = fnv1a64_bytes(output_vectors.data(), sizeof(double) * output_vectors.size(), h);
  return h;
}

SgnsStream make_sgns_stream(const std::vector<Document>& docs, int min_count) {
  std::map<std::string, std::int64_t> freq;
  for (const auto& doc : docs)
    for (const auto& token : doc.tokens) ++freq[token];

  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (const auto& [token, count] : freq)
    if (count >= min_count) kept.emplace_back(token, count);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  SgnsStream stream;
  std::unordered_map<std::string, int> row_of;
  for (const auto& [token, count] : kept) {
    row_of.emplace(token, static_cast<int>(stream.symbols.size()));
    stream.symbols.push_back(token);
    stream.counts.push_back(count);
  }
  if (auto it = row_of.find(Vocabulary::kUnkSymbol); it != row_of.end()) {
    stream.unk_row = it->second;
  } else {
    stream.unk_row = static_cast<int>(stream.symbols.size());
    stream.symbols.push_back(Vocabulary::kUnkSymbol);
    stream.counts.push_back(0);
  }

  stream.docs.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<int> encoded;
    encoded.reserve(doc.tokens.size());
    for (const auto& token : doc.tokens) {
      auto it = row_of.find(token);
      if (it != row_of.end()) encoded.push_back(it->second);
    }
    stream.docs.push_back(std::move(encoded));
  }
  return stream;
}

double sgns_pair_loss(const EmbeddingModel& m, const Eigen::MatrixXd* mix,
                      int center, int context,
                      const std::vector<int>& negatives, SgnsGradient* grad) {
  const int dim = m.dim;
  const int topic_base = m.rows() - m.n_topic_rows;
  std::vector<double> comp_in(dim), comp_out(dim);
  compose(m.input_vectors.data(), dim, center, mix, topic_base, comp_in.data());

  Eigen::VectorXd d_comp_in = Eigen::VectorXd::Zero(dim);
  double loss = 0.0;

  auto accumulate = [&](std::map<int, Eigen::VectorXd>& store, int row,
                        const Eigen::VectorXd& v, double scale) {
    auto [it, inserted] = store.try_emplace(row, Eigen::VectorXd::Zero(dim));
    it->second += scale * v;
  };

  auto target_term = [&](int target, double label) {
    compose(m.output_vectors.data(), dim, target, mix, topic_base,
            comp_out.data());
    const double f = dot(comp_in.data(), comp_out.data(), dim);
    loss -= label > 0.5 ? log_sigmoid(f) : log_sigmoid(-f);
    if (!grad) return;
    const double dldf = sigmoid(f) - label;
    const Eigen::Map<const Eigen::VectorXd> u(comp_out.data(), dim);
    const Eigen::Map<const Eigen::VectorXd> v(comp_in.data(), dim);
    d_comp_in += dldf * u;
    accumulate(grad->d_output, target, dldf * v, 1.0);
    if (mix)
      for (Eigen::Index t = 0; t < mix->cols(); ++t)
        if ((*mix)(target, t) != 0.0)
          accumulate(grad->d_output, topic_base + static_cast<int>(t),
                     dldf * v, (*mix)(target, t));
  };

  target_term(context, 1.0);
  for (int neg : negatives) target_term(neg, 0.0);

  if (grad) {
    accumulate(grad->d_input, center, d_comp_in, 1.0);
    if (mix)
      for (Eigen::Index t = 0; t < mix->cols(); ++t)
        if ((*mix)(center, t) != 0.0)
          accumulate(grad->d_input, topic_base + static_cast<int>(t), d_comp_in,
                     (*mix)(center, t));
  }
  return loss;
}

EmbeddingModel train_sgns(const SgnsStream& stream,
                          const Eigen::MatrixXd* mixtures,
                          const std::vector<std::string>& topic_names,
                          const SkipGramConfig& config) {
  const int n_words = static_cast<int>(stream.symbols.size());
  const auto n_topics = static_cast<int>(topic_names.size());
  if (config.window < 1 || config.dim < 1 || config.negative_samples < 1)
    throw DomainError("train_sgns: window, dim and negative_samples must be >= 1");
  if (mixtures &&
      (mixtures->rows() != n_words || mixtures->cols() != n_topics))
    throw DomainError("train_sgns: mixture shape does not match stream");

  const std::int64_t pass_pairs = count_window_pairs(stream.docs, config.window);
  if (pass_pairs == 0)
    throw DomainError("train_sgns: corpus smaller than one full window");

  EmbeddingModel m;
  m.dim = config.dim;
  m.symbols = stream.symbols;
  for (const auto& name : topic_names) {
    if (std::find(stream.symbols.begin(), stream.symbols.end(), name) !=
        stream.symbols.end())
      throw DomainError("train_sgns: topic symbol collides with corpus token: " + name);
    m.symbols.push_back(name);
  }
  m.unk_row = stream.unk_row;
  m.n_topic_rows = n_topics;
  m.config = config;

  const auto rows = static_cast<std::size_t>(m.rows());
  m.input_vectors.resize(rows * config.dim);
  m.output_vectors.assign(rows * config.dim, 0.0);
  {
    Rng init_rng(derive_seed(config.seed, "sgns.init"));
    for (double& x : m.input_vectors)
      x = (init_rng.uniform01() - 0.5) / config.dim;
  }

  std::vector<double> noise_weights(n_words);
  for (int i = 0; i < n_words; ++i)
    noise_weights[i] = std::pow(static_cast<double>(stream.counts[i]), kNoisePower);
  const AliasSampler noise(noise_weights);

  const int topic_base = n_words;
  const std::int64_t total_pairs =
      pass_pairs * static_cast<std::int64_t>(config.iterations);

  auto lr_at = [&](std::int64_t pair_idx, std::int64_t shard_total) {
    if (shard_total <= 1) return config.lr_start;
    const double t = static_cast<double>(pair_idx) / static_cast<double>(shard_total - 1);
    return config.lr_start + (config.lr_end - config.lr_start) * t;
  };

  auto run_shard = [&](std::size_t doc_lo, std::size_t doc_hi, Rng rng,
                       std::int64_t shard_total, double* pass_loss_out) {
    PairBuffers buf;
    buf.comp_in.resize(config.dim);
    buf.comp_out.resize(config.dim);
    buf.acc.resize(config.dim);
    std::int64_t done = 0;
    for (int pass = 0; pass < config.iterations; ++pass) {
      double loss_sum = 0.0;
      std::int64_t loss_pairs = 0;
      for (std::size_t d = doc_lo; d < doc_hi; ++d) {
        const auto& doc = stream.docs[d];
        const auto len = static_cast<std::int64_t>(doc.size());
        for (std::int64_t i = 0; i < len; ++i) {
          const std::int64_t lo = std::max<std::int64_t>(0, i - config.window);
          const std::int64_t hi = std::min<std::int64_t>(len - 1, i + config.window);
          for (std::int64_t j = lo; j <= hi; ++j) {
            if (j == i) continue;
            const double lr = lr_at(done, shard_total);
            loss_sum += train_pair(m, mixtures, topic_base, doc[i], doc[j],
                                   noise, config.negative_samples, lr, rng, buf);
            ++done;
            ++loss_pairs;
          }
        }
      }
      if (loss_pairs > 0) {
        if (pass == 0) pass_loss_out[0] = loss_sum / static_cast<double>(loss_pairs);
        if (pass == config.iterations - 1)
          pass_loss_out[1] = loss_sum / static_cast<double>(loss_pairs);
      }
    }
  };

  if (config.threads <= 1) {
    double losses[2] = {0.0, 0.0};
    run_shard(0, stream.docs.size(), Rng(derive_seed(config.seed, "sgns.noise")),
              total_pairs, losses);
    m.first_pass_loss = losses[0];
    m.last_pass_loss = losses[1];
  } else {
    // hogwild: unsynchronized shard updates; per-shard learning-rate clocks
    const int n_threads = config.threads;
    std::vector<std::thread> workers;
    std::vector<std::array<double, 2>> losses(n_threads, {0.0, 0.0});
    const std::size_t chunk = (stream.docs.size() + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const std::size_t lo = std::min(static_cast<std::size_t>(t) * chunk,
                                      stream.docs.size());
      const std::size_t hi = std::min(lo + chunk, stream.docs.size());
      std::vector<std::vector<int>> shard_docs(stream.docs.begin() + lo,
                                               stream.docs.begin() + hi);
      const std::int64_t shard_pairs =
          count_window_pairs(shard_docs, config.window) *
          static_cast<std::int64_t>(config.iterations);
      workers.emplace_back([&, t, lo, hi, shard_pairs] {
        run_shard(lo, hi,
                  Rng(derive_seed(config.seed, "sgns.noise.t" + std::to_string(t))),
                  shard_pairs, losses[t].data());
      });
    }
    for (auto& w : workers) w.join();
    double first = 0.0, last = 0.0;
    for (const auto& l : losses) {
      first += l[0];
      last += l[1];
    }
    m.first_pass_loss = first / n_threads;
    m.last_pass_loss = last / n_threads;
  }

  // explosion guard
  double max_sq = 0.0;
  for (int r = 0; r < m.rows(); ++r) {
    max_sq = std::max(max_sq, dot(m.input_row(r), m.input_row(r), m.dim));
    max_sq = std::max(max_sq, dot(m.output_row(r), m.output_row(r), m.dim));
  }
  if (std::sqrt(max_sq) > 1e3 || !std::isfinite(max_sq))
    throw DomainError("train_sgns: embedding norms exploded");

  m.rebuild_index();
  return m;
}

}  // namespace topicembed
