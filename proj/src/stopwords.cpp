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

#include "topicembed/stopwords.hpp"

#include <fstream>
#include <sstream>

#include "topicembed/common.hpp"

namespace topicembed {

namespace {

// Keep in sync with data/stopwords_en_v1.txt.
constexpr const char* kStopWordsEn1 =
    "a about above across after afterwards again against all almost alone "
    "along already also although always am among amongst amount an and "
    "another any anyhow anyone anything anyway anywhere are around as at "
    "back be became because become becomes becoming been before beforehand "
    "behind being below beside besides between beyond both bottom but by ca "
    "call can cannot could did do does doing done down due during each eight "
    "either eleven else elsewhere empty enough even ever every everyone "
    "everything everywhere except few fifteen fifty first five for former "
    "formerly forty four from front full further get give go had has have he "
    "hence her here hereafter hereby herein hereupon hers herself him "
    "himself his how however hundred i if in indeed into is it its itself "
    "just keep last latter latterly least less made make many may me "
    "meanwhile might mine more moreover most mostly move much must my myself "
    "name namely neither never nevertheless next nine no nobody none noone "
    "nor not nothing now nowhere of off often on once one only onto or other "
    "others otherwise our ours ourselves out over own part per perhaps "
    "please put quite rather re really regarding same say see seem seemed "
    "seeming seems serious several she should show side since six sixty so "
    "some somehow someone something sometime sometimes somewhere still such "
    "take ten than that the their them themselves then thence there "
    "thereafter thereby therefore therein thereupon these they third this "
    "those though three through throughout thru thus to together too top "
    "toward towards twelve twenty two under unless until up upon us used "
    "using various very via was we well were what whatever when whence "
    "whenever where whereafter whereas whereby wherein whereupon wherever "
    "whether which while whither who whoever whole whom whose why will with "
    "within without would yet you your yours yourself yourselves";

std::vector<std::string> split_words(const char* text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

const std::vector<std::string>& builtin_stop_words() {
  static const std::vector<std::string> words = split_words(kStopWordsEn1);
  return words;
}

const std::string& builtin_stop_list_version() {
  static const std::string version = "en-1";
  return version;
}

std::vector<std::string> load_stop_words(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stop-word list: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

std::string stop_list_fingerprint(const std::vector<std::string>& words) {
  std::uint64_t h = kFnvOffset;
  for (const auto& w : words) {
    h = fnv1a64(w, h);
    h = fnv1a64("\n", h);
  }
  return "file:" + hash_hex(h);
}

}  // namespace topicembed
