// topicembed/chat.hpp
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

#include <istream>
#include <string>
#include <vector>

#include "topicembed/corpus.hpp"

namespace topicembed {

// Extracts participant (*PAR:) speech from CHAT-format transcripts.
// Event markup is stripped: bracketed codes, <...> retracing groups,
// &-prefixed fragments, +... terminators, time-alignment marks.
// %-annotation tiers and other speakers' tiers contribute nothing.
//
// A stream may hold several @Begin/@End blocks; each becomes one Document.
// A missing @Begin header is a recoverable warning; undecodable (binary)
// input raises IoError.
std::vector<Document> parse_chat(std::istream& in,
                                 std::vector<std::string>* warnings = nullptr);

std::vector<Document> parse_chat_file(const std::string& path,
                                      std::vector<std::string>* warnings = nullptr);

}  // namespace topicembed
