// topicembed/stopwords.hpp
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

#include <set>
#include <string>
#include <vector>

namespace topicembed {

// Compiled-in copy of data/stopwords_en_v1.txt (version "en-1").
const std::vector<std::string>& builtin_stop_words();
const std::string& builtin_stop_list_version();

// Load a replacement list: one lowercase word per line, '#' comments.
std::vector<std::string> load_stop_words(const std::string& path);

// "file:" + 16-hex-digit content hash; identifies user-supplied lists.
std::string stop_list_fingerprint(const std::vector<std::string>& words);

}  // namespace topicembed
