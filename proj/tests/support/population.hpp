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

#ifndef HEUREVO_TESTS_SUPPORT_POPULATION_HPP_
#define HEUREVO_TESTS_SUPPORT_POPULATION_HPP_

#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "heurevo/evolution/population.hpp"
#include "heurevo/tasks/jssp.hpp"
#include "support/oracles.hpp"

namespace heurevo::testing {

// Candidate with a distinct program per `tag`.
inline evolution::Candidate make_candidate(int tag, double objective, double align,
                                           bool valid = true) {
  evolution::Candidate c(dsl::HeuristicProgram::parse(fmt::format("proc_time + {}", tag),
                                                      jssp::feature_schema()));
  c.objective = valid ? objective : kInvalidObjective;
  c.valid = valid;
  c.diagnostics.align = align;
  return c;
}

// Up to 12 members on coarse grids so ties and duplicates are common.
inline std::vector<evolution::Candidate> random_population(std::mt19937& gen, std::size_t n) {
  std::vector<evolution::Candidate> out;
  std::uniform_int_distribution<int> obj(0, 6), al(0, 4), tag(0, 40), roll(0, 9);
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty() && roll(gen) == 0) {
      out.push_back(out[static_cast<std::size_t>(roll(gen)) % out.size()]);
      continue;
    }
    out.push_back(make_candidate(tag(gen), 100.0 + 5 * obj(gen), 0.25 * al(gen), roll(gen) != 1));
  }
  return out;
}

inline std::vector<oracle::ParetoItem> as_items(const std::vector<evolution::Candidate>& cs) {
  std::vector<oracle::ParetoItem> out;
  for (const auto& c : cs) out.push_back({c.id(), c.objective, c.align(), c.valid});
  return out;
}

inline std::vector<std::string> ids_of(const std::vector<evolution::Candidate>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.id());
  return out;
}

}  // namespace heurevo::testing

#endif  // HEUREVO_TESTS_SUPPORT_POPULATION_HPP_
