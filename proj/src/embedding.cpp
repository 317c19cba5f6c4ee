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

#include "topicembed/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "topicembed/common.hpp"
#include "topicembed/mathutil.hpp"
#include "topicembed/sgns.hpp"

namespace topicembed {

namespace {
constexpr char kEmbMagic[8] = {'T', 'E', 'E', 'M', 'B', 'M', '0', '1'};
constexpr std::size_t kImportRowCap = 1000000;
}  // namespace

EmbeddingModel train_skipgram(const Corpus& corpus, const SkipGramConfig& config) {
  const SgnsStream stream = make_sgns_stream(corpus.documents, config.min_count);
  return train_sgns(stream, nullptr, {}, config);
}

std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingModel& model, const std::string& symbol, int k) {
  const int query = model.row_of(symbol);
  if (query < 0)
    throw DomainError("nearest_neighbors: unknown symbol: " + symbol);
  if (k >= model.rows())
    throw DomainError("nearest_neighbors: k must be smaller than the row count");

  const Eigen::Map<const Eigen::VectorXd> q(model.input_row(query), model.dim);
  const double q_norm = q.norm();
  if (q_norm == 0.0)
    throw DomainError("nearest_neighbors: query vector has zero norm");

  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(model.rows() - 1);
  for (int r = 0; r < model.rows(); ++r) {
    if (r == query) continue;
    const Eigen::Map<const Eigen::VectorXd> v(model.input_row(r), model.dim);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    scored.emplace_back(model.symbols[r], q.dot(v) / (q_norm * norm));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(scored.size()) > k) scored.resize(k);
  return scored;
}

EmbeddingModel import_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string header;
  if (!std::getline(in, header))
    throw IoError(path + ":1: missing header line");
  std::istringstream hs(header);
  std::size_t declared_rows = 0;
  int dim = 0;
  if (!(hs >> declared_rows >> dim) || dim < 1)
    throw IoError(path + ":1: header must be \"rows dim\"");

  const std::size_t rows = std::min(declared_rows, kImportRowCap);
  if (declared_rows > kImportRowCap)
    std::cerr << "import_embeddings: keeping the first " << kImportRowCap
              << " of " << declared_rows << " rows\n";

  EmbeddingModel m;
  m.dim = dim;
  m.symbols.reserve(rows);
  m.input_vectors.reserve(rows * dim);
  std::unordered_set<std::string> seen;

  std::string line;
  std::size_t line_no = 1;
  while (m.symbols.size() < rows && std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* p = line.c_str();
    const char* end = p + line.size();
    while (p < end && *p == ' ') ++p;
    const char* sym_start = p;
    while (p < end && *p != ' ') ++p;
    if (p == sym_start)
      throw IoError(path + ":" + std::to_string(line_no) + ": missing symbol");
    const std::string symbol(sym_start, p);
    std::vector<double> values;
    values.reserve(dim);
    while (p < end) {
      char* next = nullptr;
      const float v = std::strtof(p, &next);
      if (next == p) break;
      values.push_back(static_cast<double>(v));
      p = next;
    }
    if (static_cast<int>(values.size()) != dim)
      throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(dim) + " values, found " +
                    std::to_string(values.size()));
    if (!seen.insert(symbol).second)
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": duplicate symbol: " + symbol);
    m.symbols.push_back(symbol);
    m.input_vectors.insert(m.input_vectors.end(), values.begin(), values.end());
  }
  if (m.symbols.size() < rows)
    throw IoError(path + ": header declares " + std::to_string(declared_rows) +
                  " rows, file holds " + std::to_string(m.symbols.size()));

  m.output_vectors.assign(m.input_vectors.size(), 0.0);
  m.rebuild_index();
  m.unk_row = m.row_of(Vocabulary::kUnkSymbol);
  return m;
}

void export_embeddings(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << model.rows() << ' ' << model.dim << '\n';
  char buf[32];
  for (int r = 0; r < model.rows(); ++r) {
    out << model.symbols[r];
    const double* row = model.input_row(r);
    for (int j = 0; j < model.dim; ++j) {
      // %.9g round-trips float32 exactly
      std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(static_cast<float>(row[j])));
      out << ' ' << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure: " + path);
}

void save_embedding(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kEmbMagic, sizeof(kEmbMagic));

  auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };

  put_u64(static_cast<std::uint64_t>(model.rows()));
  put_u64(static_cast<std::uint64_t>(model.dim));
  put_u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(model.unk_row)));
  put_u64(static_cast<std::uint64_t>(model.n_topic_rows));
  put_u64(static_cast<std::uint64_t>(model.config.dim));
  put_u64(static_cast<std::uint64_t>(model.config.window));
  put_u64(static_cast<std::uint64_t>(model.config.iterations));
  put_u64(static_cast<std::uint64_t>(model.config.negative_samples));
  put_u64(static_cast<std::uint64_t>(model.config.min_count));
  put_f64(model.config.lr_start);
  put_f64(model.config.lr_end);
  put_u64(model.config.seed);
  put_f64(model.first_pass_loss);
  put_f64(model.last_pass_loss);
  for (const auto& s : model.symbols) {
    const auto len = static_cast<std::uint32_t>(s.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(s.data(), len);
  }
  out.write(reinterpret_cast<const char*>(model.input_vectors.data()),
            static_cast<std::streamsize>(8 * model.input_vectors.size()));
  out.write(reinterpret_cast<const char*>(model.output_vectors.data()),
            static_cast<std::streamsize>(8 * model.output_vectors.size()));
  if (!out) throw IoError("write failure: " + path);
}

EmbeddingModel load_embedding(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kEmbMagic, 8) != 0)
    throw IoError("not an embedding model file: " + path);

  auto get_u64 = [&] {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  auto get_f64 = [&] {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };

  EmbeddingModel m;
  const auto rows = static_cast<std::size_t>(get_u64());
  m.dim = static_cast<int>(get_u64());
  m.unk_row = static_cast<int>(static_cast<std::int64_t>(get_u64()));
  m.n_topic_rows = static_cast<int>(get_u64());
  m.config.dim = static_cast<int>(get_u64());
  m.config.window = static_cast<int>(get_u64());
  m.config.iterations = static_cast<int>(get_u64());
  m.config.negative_samples = static_cast<int>(get_u64());
  m.config.min_count = static_cast<int>(get_u64());
  m.config.lr_start = get_f64();
  m.config.lr_end = get_f64();
  m.config.seed = get_u64();
  m.first_pass_loss = get_f64();
  m.last_pass_loss = get_f64();

  m.symbols.resize(rows);
  for (auto& s : m.symbols) {
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 4);
    s.resize(len);
    in.read(s.data(), len);
  }
  m.input_vectors.resize(rows * m.dim);
  m.output_vectors.resize(rows * m.dim);
  in.read(reinterpret_cast<char*>(m.input_vectors.data()),
          static_cast<std::streamsize>(8 * m.input_vectors.size()));
  in.read(reinterpret_cast<char*>(m.output_vectors.data()),
          static_cast<std::streamsize>(8 * m.output_vectors.size()));
  if (!in) throw IoError("truncated embedding model file: " + path);
  m.rebuild_index();
  return m;
}

std::vector<std::tuple<std::string, double, double>> project_2d(
    const EmbeddingModel& model, const std::vector<std::string>& symbols) {
  if (symbols.size() < 3)
    throw DomainError("project_2d: need at least 3 symbols");

  Eigen::MatrixXd x(symbols.size(), model.dim);
  for (std::size_t i = 0; i < symbols.size(); ++i)
    x.row(i) = model.lookup(symbols[i]).transpose();

  const PcaResult pca = pca_fit(x);
  if (pca.eigenvalues(0) < 1e-12)
    throw DomainError("project_2d: selection has fewer than 2 distinct vectors");

  const Eigen::MatrixXd centered = x.rowwise() - pca.mean.transpose();
  const Eigen::MatrixXd coords = centered * pca.components.topRows(2).transpose();

  std::vector<std::tuple<std::string, double, double>> out;
  out.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i)
    out.emplace_back(symbols[i], coords(static_cast<Eigen::Index>(i), 0),
                     coords(static_cast<Eigen::Index>(i), 1));
  return out;
}

}  // namespace topicembed
