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

#include "topicembed/common.hpp"

#include <algorithm>
#include <cstdio>

namespace topicembed {

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

void Provenance::set_from_ids(const std::vector<std::string>& doc_ids) {
  fit_doc_hashes.clear();
  fit_doc_hashes.reserve(doc_ids.size());
  for (const auto& id : doc_ids) fit_doc_hashes.push_back(doc_id_hash(id));
  std::sort(fit_doc_hashes.begin(), fit_doc_hashes.end());
}

bool Provenance::disjoint_from(
    const std::vector<std::uint64_t>& sorted_hashes) const {
  auto a = fit_doc_hashes.begin();
  auto b = sorted_hashes.begin();
  while (a != fit_doc_hashes.end() && b != sorted_hashes.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace topicembed
