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

#include "topicembed/chat.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "topicembed/common.hpp"

namespace topicembed {

namespace {

// Removes open..close spans including the delimiters. CHAT codes do not
// nest, but a depth counter keeps unbalanced input from derailing the scan.
std::string strip_spans(const std::string& s, char open, char close) {
  std::string out;
  out.reserve(s.size());
  int depth = 0;
  for (char c : s) {
    if (c == open) {
      ++depth;
    } else if (c == close) {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      out.push_back(c);
    }
  }
  return out;
}

// Time-alignment marks: 0x15-delimited "12345_67890" spans.
std::string strip_time_marks(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool inside = false;
  for (char c : s) {
    if (c == '\x15') {
      inside = !inside;
    } else if (!inside) {
      out.push_back(c);
    }
  }
  return out;
}

bool punctuation_only(const std::string& s) {
  for (unsigned char c : s)
    if (std::isalnum(c)) return false;
  return true;
}

void append_tier_words(const std::string& content, std::vector<std::string>* tokens) {
  std::string cleaned = strip_time_marks(content);
  cleaned = strip_spans(cleaned, '<', '>');  // retraced material
  cleaned = strip_spans(cleaned, '[', ']');  // event/error codes

  std::istringstream words(cleaned);
  std::string word;
  while (words >> word) {
    if (word[0] == '&' || word[0] == '+') continue;  // fragments, terminators
    // omitted-material parens: (be)cause -> because
    std::string surface;
    for (char c : word)
      if (c != '(' && c != ')') surface.push_back(c);
    // special-form suffix: word@o -> word
    if (auto at = surface.find('@'); at != std::string::npos)
      surface.erase(at);
    if (surface.empty() || punctuation_only(surface)) continue;
    tokens->push_back(surface);
  }
}

struct TierLine {
  std::string text;  // logical line with continuations folded in
};

}  // namespace

std::vector<Document> parse_chat(std::istream& in,
                                 std::vector<std::string>* warnings) {
  std::vector<std::string> raw_lines;
  {
    std::string line;
    while (std::getline(in, line)) {
      if (line.find('\0') != std::string::npos)
        throw IoError("parse_chat: binary input (NUL byte)");
      if (!line.empty() && line.back() == '\r') line.pop_back();
      raw_lines.push_back(line);
    }
    if (in.bad()) throw IoError("parse_chat: read failure");
  }

  // Fold tab-indented continuation lines into their tier line.
  std::vector<TierLine> lines;
  for (const auto& raw : raw_lines) {
    if (!raw.empty() && (raw[0] == '\t' || raw[0] == ' ') && !lines.empty()) {
      lines.back().text += ' ';
      lines.back().text += raw;
    } else if (!raw.empty()) {
      lines.push_back({raw});
    }
  }

  std::vector<Document> docs;
  Document current;
  bool in_transcript = false;
  bool saw_begin = false;
  bool warned_header = false;

  auto flush = [&] {
    if (in_transcript) docs.push_back(std::move(current));
    current = Document{};
    in_transcript = false;
  };

  for (const auto& tier : lines) {
    const std::string& text = tier.text;
    if (text[0] == '@') {
      if (text.rfind("@Begin", 0) == 0) {
        flush();
        in_transcript = true;
        saw_begin = true;
        continue;
      }
      if (text.rfind("@End", 0) == 0) {
        flush();
        continue;
      }
      if (text.rfind("@PID", 0) == 0) {
        auto colon = text.find(':');
        if (colon != std::string::npos) {
          std::string pid = text.substr(colon + 1);
          std::istringstream trim(pid);
          trim >> pid;
          if (in_transcript || !saw_begin) current.group_id = pid;
        }
      }
      continue;
    }
    if (text[0] == '%') continue;  // annotation tier
    if (text[0] == '*') {
      auto colon = text.find(':');
      if (colon == std::string::npos) continue;
      const std::string speaker = text.substr(1, colon - 1);
      if (!saw_begin && !in_transcript) {
        if (warnings && !warned_header)
          warnings->push_back("missing @Begin header; parsing anyway");
        warned_header = true;
        in_transcript = true;  // implicit transcript
      }
      if (speaker == "PAR")
        append_tier_words(text.substr(colon + 1), &current.tokens);
      continue;
    }
    // stray content outside any tier: ignore
  }
  flush();

  if (docs.empty() && !raw_lines.empty() && warnings && !saw_begin && !warned_header)
    warnings->push_back("no transcript content found");
  return docs;
}

std::vector<Document> parse_chat_file(const std::string& path,
                                      std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  auto docs = parse_chat(in, warnings);
  const std::string stem = std::filesystem::path(path).stem().string();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].group_id.empty())
      docs[i].group_id = docs.size() == 1 ? stem : stem + "#" + std::to_string(i);
  }
  return docs;
}

}  // namespace topicembed
