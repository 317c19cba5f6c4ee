// topicembed/corpus.hpp
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

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace topicembed {

struct Document {
  std::vector<std::string> tokens;
  std::string group_id;          // speaker / participant identifier
  std::optional<int> label;      // 0 = control, 1 = positive
  std::string doc_id;            // stable id, assigned when a corpus is built
};

struct PreprocessConfig {
  // matched against the cleaned (lowercase, alphabetic) token
  std::set<std::string> stop_words;
  std::set<std::string> fillers{"um", "uh"};
  // matched against the raw lowercased surface, before markup stripping
  std::set<std::string> artifact_tokens{"[unk]", "[noise]"};
  std::string stop_list_version;

  static PreprocessConfig builtin();
  static PreprocessConfig from_file(const std::string& stop_word_path);
};

// Lowercases, drops digit-bearing tokens, strips non-alphabetic characters,
// then filters stop words / fillers / ASR artifacts. Idempotent.
std::vector<std::string> preprocess(const std::vector<std::string>& raw,
                                    const PreprocessConfig& config);

struct Vocabulary {
  static constexpr const char* kUnkSymbol = "UNK";

  std::unordered_map<std::string, int> id_of;
  std::vector<std::string> word_of;
  std::vector<std::int64_t> counts;  // UNK holds the dropped-token total
  int unk_id = -1;

  int size() const { return static_cast<int>(word_of.size()); }
  int id_or_unk(const std::string& word) const {
    auto it = id_of.find(word);
    return it == id_of.end() ? unk_id : it->second;
  }
};

// Words with corpus frequency >= min_count, ids ordered by frequency
// (descending, then lexicographic), UNK appended last.
Vocabulary build_vocabulary(const std::vector<Document>& docs, int min_count);

struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocabulary;
  std::string stop_list_version;
  int min_count = 1;

  std::vector<int> encode(const Document& doc) const;
};

// Assigns sequential doc ids ("d000000", ...) to documents that lack one.
Corpus build_corpus(std::vector<Document> docs, int min_count,
                    const std::string& stop_list_version);

// Archive layout: <dir>/documents.jsonl + <dir>/vocab.tsv + <dir>/meta.json.
// Byte-identical across runs for identical inputs and config.
void write_corpus_archive(const Corpus& corpus, const std::string& dir);
Corpus read_corpus_archive(const std::string& dir);

// JSON-lines input with fields {text, group_id, label}; text is split on
// whitespace, preprocessing is the caller's job.
std::vector<Document> read_jsonl_documents(const std::string& path);

// whole file = one document, whitespace-tokenized
Document read_text_document(const std::string& path);

}  // namespace topicembed
