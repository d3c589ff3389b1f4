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

#include "heurevo/engine/state.hpp"

#include <bit>
#include <stdexcept>

#include "heurevo/util/hash.hpp"

namespace heurevo {

std::string_view to_string(TaskKind task) {
  switch (task) {
    case TaskKind::kJssp:
      return "jssp";
    case TaskKind::kTsp:
      return "tsp";
    case TaskKind::kCvrp:
      return "cvrp";
    case TaskKind::kMaxCut:
      return "maxcut";
  }
  return "unknown";
}

TaskKind parse_task(std::string_view name) {
  if (name == "jssp") return TaskKind::kJssp;
  if (name == "tsp") return TaskKind::kTsp;
  if (name == "cvrp") return TaskKind::kCvrp;
  if (name == "maxcut") return TaskKind::kMaxCut;
  throw std::invalid_argument("unknown task '" + std::string(name) + "'");
}

const CandidateAction* EpisodeState::find(ActionId id) const {
  for (const auto& c : candidates) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

namespace {

std::uint64_t mix_u64(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFF;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string state_digest(const EpisodeState& state) {
  std::uint64_t h = fnv1a64(to_string(state.task));
  h = mix_u64(h, static_cast<std::uint64_t>(state.step));
  for (const auto& c : state.candidates) {
    h = mix_u64(h, static_cast<std::uint64_t>(to_int(c.id)));
    for (double f : c.features) h = mix_u64(h, std::bit_cast<std::uint64_t>(f));
  }
  return to_hex(h);
}

}  // namespace heurevo
