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

#include "heurevo/evolution/population.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace heurevo::evolution {

bool dominates(const Point& p, const Point& q) {
  return p.first <= q.first && p.second <= q.second &&
         (p.first < q.first || p.second < q.second);
}

std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Point>& points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> beats(n);
  std::vector<std::size_t> beaten_by(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && dominates(points[i], points[j])) {
        beats[i].push_back(j);
        ++beaten_by[j];
      }
    }
  }
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    if (beaten_by[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      for (std::size_t j : beats[i]) {
        if (--beaten_by[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<int> competition_ranks(const std::vector<double>& keys) {
  std::vector<int> ranks(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    int better = 0;
    for (double k : keys) better += k < keys[i];
    ranks[i] = better + 1;
  }
  return ranks;
}

namespace {

std::vector<double> objective_keys(const std::vector<Candidate>& members) {
  std::vector<double> keys;
  for (const auto& c : members) keys.push_back(c.objective);
  return keys;
}

std::vector<double> alignment_keys(const std::vector<Candidate>& members) {
  std::vector<double> keys;
  for (const auto& c : members) keys.push_back(-c.align());
  return keys;
}

}  // namespace

std::vector<double> rank_scores(const std::vector<Candidate>& members, double lambda) {
  const auto rf = competition_ranks(objective_keys(members));
  const auto ra = competition_ranks(alignment_keys(members));
  std::vector<double> s(members.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = rf[i] + lambda * ra[i];
  return s;
}

double rank_score(const Candidate& candidate, const std::vector<Candidate>& members,
                  double lambda) {
  int rf = 1, ra = 1;
  bool found = false;
  for (const auto& m : members) {
    rf += m.objective < candidate.objective;
    ra += m.align() > candidate.align();
    found = found || m.id() == candidate.id();
  }
  if (!found) throw std::invalid_argument("candidate is not a member of the population");
  return rf + lambda * ra;
}

std::vector<Candidate> valid_unique(const std::vector<Candidate>& merged) {
  std::vector<Candidate> out;
  std::set<std::string> seen;
  for (const auto& c : merged) {
    if (c.valid && seen.insert(c.id()).second) out.push_back(c);
  }
  return out;
}

std::vector<Candidate> pareto_retain(const std::vector<Candidate>& merged, std::size_t capacity,
                                     double lambda) {
  const auto pool = valid_unique(merged);
  if (pool.size() <= capacity) return pool;
  std::vector<Point> points;
  for (const auto& c : pool) points.emplace_back(c.objective, -c.align());
  const auto scores = rank_scores(pool, lambda);

  std::vector<Candidate> out;
  for (auto front : nondominated_sort(points)) {
    const std::size_t room = capacity - out.size();
    if (room == 0) break;
    if (front.size() > room) {
      std::sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return pool[a].id() < pool[b].id();
      });
      front.resize(room);
    }
    for (std::size_t i : front) out.push_back(pool[i]);
  }
  return out;
}

std::vector<Candidate> objective_retain(const std::vector<Candidate>& merged,
                                        std::size_t capacity) {
  auto pool = valid_unique(merged);
  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    return a.id() < b.id();
  });
  if (pool.size() > capacity) pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(capacity), pool.end());
  return pool;
}

namespace {

struct PoolEntry {
  std::size_t index;
  int rank;
};

std::vector<PoolEntry> parent_pool(const std::vector<Candidate>& population, Criterion criterion,
                                   std::size_t top_k) {
  if (population.empty()) throw std::invalid_argument("cannot sample from an empty population");
  if (top_k == 0) throw std::invalid_argument("top_k must be at least 1");
  const auto ranks = competition_ranks(criterion == Criterion::kObjective
                                           ? objective_keys(population)
                                           : alignment_keys(population));
  std::vector<PoolEntry> pool;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (static_cast<std::size_t>(ranks[i]) <= top_k) pool.push_back({i, ranks[i]});
  }
  std::sort(pool.begin(), pool.end(), [&](const PoolEntry& a, const PoolEntry& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return population[a.index].id() < population[b.index].id();
  });
  return pool;
}

}  // namespace

const Candidate& sample_parent(const std::vector<Candidate>& population, Criterion criterion,
                               std::size_t top_k, Rng& rng) {
  const auto pool = parent_pool(population, criterion, top_k);
  std::vector<double> w;
  for (const auto& e : pool) w.push_back(1.0 / e.rank);
  return population[pool[rng.weighted_index(w)].index];
}

std::vector<double> parent_probabilities(const std::vector<Candidate>& population,
                                         Criterion criterion, std::size_t top_k) {
  const auto pool = parent_pool(population, criterion, top_k);
  double total = 0.0;
  for (const auto& e : pool) total += 1.0 / e.rank;
  std::vector<double> p(population.size(), 0.0);
  for (const auto& e : pool) p[e.index] = (1.0 / e.rank) / total;
  return p;
}

}  // namespace heurevo::evolution
