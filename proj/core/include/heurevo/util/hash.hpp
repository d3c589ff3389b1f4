// Copyright 2026 The heurevo Authors.
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

#ifndef HEUREVO_UTIL_HASH_HPP_
#define HEUREVO_UTIL_HASH_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace heurevo {

// 64-bit FNV-1a. Stable across platforms and runs; not cryptographic.
constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t basis = 0xcbf29ce484222325ULL) {
  std::uint64_t h = basis;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Lower-case, zero-padded 16 digit hex.
std::string to_hex(std::uint64_t value);

inline std::string content_hash(std::string_view data) {
  return to_hex(fnv1a64(data));
}

}  // namespace heurevo

#endif  // HEUREVO_UTIL_HASH_HPP_
