// topicembed/common.hpp
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

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace topicembed {

static_assert(std::endian::native == std::endian::little,
              "model containers are little-endian; big-endian hosts unsupported");

// Exit-code contract (see tools/main.cpp): DomainError -> 1, IoError -> 2.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t n,
                                   std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// All randomness flows from one root seed; each component draws from
// splitmix64(root ^ fnv1a64(tag)). Tags are listed in the README.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) {
  return splitmix64(root ^ fnv1a64(tag));
}

std::string hash_hex(std::uint64_t h);

inline std::uint64_t doc_id_hash(const std::string& doc_id) {
  return fnv1a64(doc_id);
}

// Sorted hashes of the document ids an artifact (IDF table, PCA transform,
// classifier) was fitted on. Fold evaluation checks these against its test
// split to prove no test document leaked into fitting.
struct Provenance {
  std::vector<std::uint64_t> fit_doc_hashes;  // sorted ascending

  void set_from_ids(const std::vector<std::string>& doc_ids);
  bool disjoint_from(const std::vector<std::uint64_t>& sorted_hashes) const;
};

}  // namespace topicembed
