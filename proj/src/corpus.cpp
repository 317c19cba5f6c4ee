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

#include "topicembed/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "topicembed/common.hpp"
#include "topicembed/stopwords.hpp"

namespace topicembed {

namespace fs = std::filesystem;
using nlohmann::json;

PreprocessConfig PreprocessConfig::builtin() {
  PreprocessConfig config;
  const auto& words = builtin_stop_words();
  config.stop_words.insert(words.begin(), words.end());
  config.stop_list_version = builtin_stop_list_version();
  return config;
}

PreprocessConfig PreprocessConfig::from_file(const std::string& path) {
  PreprocessConfig config;
  auto words = load_stop_words(path);
  config.stop_words.insert(words.begin(), words.end());
  config.stop_list_version = stop_list_fingerprint(words);
  return config;
}

namespace {

std::string lowercase(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

bool has_digit(const std::string& s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

std::string keep_alpha(const std::string& s) {
  std::string out;
  for (unsigned char c : s)
    if (std::isalpha(c)) out.push_back(static_cast<char>(c));
  return out;
}

}  // namespace

std::vector<std::string> preprocess(const std::vector<std::string>& raw,
                                    const PreprocessConfig& config) {
  std::vector<std::string> out;
  out.reserve(raw.size());
  for (const auto& token : raw) {
    const std::string lower = lowercase(token);
    if (has_digit(lower)) continue;
    if (config.artifact_tokens.count(lower)) continue;
    const std::string word = keep_alpha(lower);
    if (word.empty()) continue;  // punctuation-only
    if (config.fillers.count(word)) continue;
    if (config.stop_words.count(word)) continue;
    out.push_back(word);
  }
  return out;
}

Vocabulary build_vocabulary(const std::vector<Document>& docs, int min_count) {
  if (min_count < 1) throw DomainError("build_vocabulary: min_count must be >= 1");
  std::map<std::string, std::int64_t> freq;
  std::int64_t total = 0;
  for (const auto& doc : docs)
    for (const auto& token : doc.tokens) {
      ++freq[token];
      ++total;
    }
  if (docs.empty() || total == 0)
    throw DomainError("build_vocabulary: empty corpus");

  std::vector<std::pair<std::string, std::int64_t>> kept;
  std::int64_t dropped = 0;
  for (const auto& [word, count] : freq) {
    if (count >= min_count)
      kept.emplace_back(word, count);
    else
      dropped += count;
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.word_of.reserve(kept.size() + 1);
  vocab.counts.reserve(kept.size() + 1);
  for (const auto& [word, count] : kept) {
    vocab.id_of.emplace(word, static_cast<int>(vocab.word_of.size()));
    vocab.word_of.push_back(word);
    vocab.counts.push_back(count);
  }
  vocab.unk_id = static_cast<int>(vocab.word_of.size());
  vocab.id_of.emplace(Vocabulary::kUnkSymbol, vocab.unk_id);
  vocab.word_of.push_back(Vocabulary::kUnkSymbol);
  vocab.counts.push_back(dropped);
  return vocab;
}

std::vector<int> Corpus::encode(const Document& doc) const {
  std::vector<int> ids;
  ids.reserve(doc.tokens.size());
  for (const auto& token : doc.tokens)
    ids.push_back(vocabulary.id_or_unk(token));
  return ids;
}

Corpus build_corpus(std::vector<Document> docs, int min_count,
                    const std::string& stop_list_version) {
  Corpus corpus;
  corpus.vocabulary = build_vocabulary(docs, min_count);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].doc_id.empty()) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "d%06zu", i);
      docs[i].doc_id = buf;
    }
  }
  corpus.documents = std::move(docs);
  corpus.stop_list_version = stop_list_version;
  corpus.min_count = min_count;
  return corpus;
}

void write_corpus_archive(const Corpus& corpus, const std::string& dir) {
  fs::create_directories(dir);

  std::ofstream docs_out(fs::path(dir) / "documents.jsonl");
  if (!docs_out) throw IoError("cannot write corpus archive to " + dir);
  for (const auto& doc : corpus.documents) {
    json j;
    j["doc_id"] = doc.doc_id;
    j["group_id"] = doc.group_id;
    j["label"] = doc.label ? json(*doc.label) : json(nullptr);
    j["tokens"] = doc.tokens;
    docs_out << j.dump() << '\n';
  }

  std::ofstream vocab_out(fs::path(dir) / "vocab.tsv");
  for (int id = 0; id < corpus.vocabulary.size(); ++id)
    vocab_out << corpus.vocabulary.word_of[id] << '\t' << id << '\t'
              << corpus.vocabulary.counts[id] << '\n';

  json meta;
  meta["format_version"] = 1;
  meta["stop_list_version"] = corpus.stop_list_version;
  meta["min_count"] = corpus.min_count;
  meta["unk_id"] = corpus.vocabulary.unk_id;
  std::ofstream meta_out(fs::path(dir) / "meta.json");
  meta_out << meta.dump(2) << '\n';
}

Corpus read_corpus_archive(const std::string& dir) {
  std::ifstream meta_in(fs::path(dir) / "meta.json");
  if (!meta_in) throw IoError("not a corpus archive (missing meta.json): " + dir);
  json meta = json::parse(meta_in);

  Corpus corpus;
  corpus.stop_list_version = meta.value("stop_list_version", "");
  corpus.min_count = meta.value("min_count", 1);

  std::ifstream docs_in(fs::path(dir) / "documents.jsonl");
  if (!docs_in) throw IoError("corpus archive missing documents.jsonl: " + dir);
  std::string line;
  while (std::getline(docs_in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    Document doc;
    doc.doc_id = j.value("doc_id", "");
    doc.group_id = j.value("group_id", "");
    if (j.contains("label") && !j["label"].is_null())
      doc.label = j["label"].get<int>();
    doc.tokens = j["tokens"].get<std::vector<std::string>>();
    corpus.documents.push_back(std::move(doc));
  }

  std::ifstream vocab_in(fs::path(dir) / "vocab.tsv");
  if (!vocab_in) throw IoError("corpus archive missing vocab.tsv: " + dir);
  while (std::getline(vocab_in, line)) {
    if (line.empty()) continue;
    std::istringstream f(line);
    std::string word;
    int id;
    std::int64_t count;
    if (!std::getline(f, word, '\t') || !(f >> id >> count))
      throw IoError("malformed vocab.tsv line: " + line);
    if (id != corpus.vocabulary.size())
      throw IoError("vocab.tsv ids out of order in " + dir);
    corpus.vocabulary.id_of.emplace(word, id);
    corpus.vocabulary.word_of.push_back(word);
    corpus.vocabulary.counts.push_back(count);
  }
  corpus.vocabulary.unk_id = meta.value("unk_id", corpus.vocabulary.size() - 1);
  return corpus;
}

std::vector<Document> read_jsonl_documents(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    Document doc;
    doc.group_id = j.value("group_id", "");
    if (j.contains("label") && !j["label"].is_null())
      doc.label = j["label"].get<int>();
    std::istringstream text(j.value("text", ""));
    std::string token;
    while (text >> token) doc.tokens.push_back(token);
    docs.push_back(std::move(doc));
  }
  return docs;
}

Document read_text_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Document doc;
  std::string token;
  while (in >> token) doc.tokens.push_back(token);
  doc.group_id = fs::path(path).stem().string();
  return doc;
}

}  // namespace topicembed
