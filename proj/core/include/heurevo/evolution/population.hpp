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

#ifndef HEUREVO_EVOLUTION_POPULATION_HPP_
#define HEUREVO_EVOLUTION_POPULATION_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "heurevo/dsl/program.hpp"
#include "heurevo/teacher/diagnostics.hpp"
#include "heurevo/util/random.hpp"

namespace heurevo::evolution {

struct Candidate {
  explicit Candidate(dsl::HeuristicProgram p) : program(std::move(p)) {}

  dsl::HeuristicProgram program;
  // Mean design-set objective, minimization form; +inf when invalid.
  double objective = kInvalidObjective;
  teacher::DiagnosticsSummary diagnostics;
  int generation_born = 0;
  bool valid = false;

  const std::string& id() const { return program.id(); }
  double align() const { return diagnostics.align; }
};

// Points are (objective, -align); both minimized.
using Point = std::pair<double, double>;

bool dominates(const Point& p, const Point& q);

// Fronts of mutually nondominated indices, best front first. Indices keep
// input order within a front.
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Point>& points);

// 1-based competition ranks (ties share the smallest rank) of `keys`,
// smaller key = better.
std::vector<int> competition_ranks(const std::vector<double>& keys);

// r_F + lambda * r_A for every member, ranks taken over `members`.
std::vector<double> rank_scores(const std::vector<Candidate>& members, double lambda);
double rank_score(const Candidate& candidate, const std::vector<Candidate>& members,
                  double lambda);

// Invalid members and repeated ids (after the first) are dropped.
std::vector<Candidate> valid_unique(const std::vector<Candidate>& merged);

// Fills front by front; the first front that does not fit is truncated by
// ascending rank score, ties by smaller id.
std::vector<Candidate> pareto_retain(const std::vector<Candidate>& merged, std::size_t capacity,
                                     double lambda);

// Best `capacity` members by (objective, id).
std::vector<Candidate> objective_retain(const std::vector<Candidate>& merged,
                                        std::size_t capacity);

enum class Criterion { kObjective, kAlignment };

// Truncated rank-based sampling: the pool is every member whose
// competition rank under `criterion` is at most `top_k`, weighted 1/rank.
// Pool order is (rank, id), so the draw depends only on the rng state.
const Candidate& sample_parent(const std::vector<Candidate>& population, Criterion criterion,
                               std::size_t top_k, Rng& rng);

// Selection probabilities used by sample_parent, aligned with
// `population`; members outside the pool get 0.
std::vector<double> parent_probabilities(const std::vector<Candidate>& population,
                                         Criterion criterion, std::size_t top_k);

}  // namespace heurevo::evolution

#endif  // HEUREVO_EVOLUTION_POPULATION_HPP_
