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

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "heurevo/engine/rollout.hpp"
#include "heurevo/tasks/maxcut.hpp"
#include "heurevo/util/random.hpp"
#include "support/oracles.hpp"

namespace heurevo::maxcut {
namespace {

std::shared_ptr<const MaxCutInstance> triangle() {
  return std::make_shared<const MaxCutInstance>(
      MaxCutInstance::make(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}));
}

TEST(MaxCut, TriangleFlip) {
  EXPECT_EQ(oracle::maxcut_optimum(*triangle()), 2.0);
  for (int v = 0; v < 3; ++v) {
    MaxCutEnvironment env(triangle(), initial_spins(3, 0, true), 6);
    EXPECT_EQ(env.current_cut(), 0.0);
    auto s = env.observe();
    EXPECT_EQ(s.candidates.size(), 3u);
    EXPECT_EQ(s.candidates[v].features[kFlipGain], 2.0);
    EXPECT_EQ(s.candidates[v].features[kStepsSinceFlip], 4.0);
    env.step(ActionId{v});
    EXPECT_EQ(env.current_cut(), 2.0);
    env.step(ActionId{v});
    EXPECT_EQ(env.current_cut(), 0.0);
    EXPECT_EQ(env.best_cut(), 2.0);
    EXPECT_EQ(env.objective(), -2.0);
    EXPECT_EQ(env.observe().candidates[v].features[kStepsSinceFlip], 1.0);
  }
}

TEST(MaxCut, IncrementalGainsMatchRecomputation) {
  std::mt19937 pick(5);
  for (int g = 0; g < 40; ++g) {
    Rng rng(g);
    auto graph = std::make_shared<const MaxCutInstance>(
        g % 2 ? generate_ba(30, 1 + g % 4, g % 4 < 2 ? Weighting::kSigned : Weighting::kUnit, rng)
              : generate_er(30, 0.2, g % 4 < 2 ? Weighting::kSigned : Weighting::kUnit, rng));
    MaxCutEnvironment env(graph, initial_spins(30, g), 60);
    double best = env.best_cut();
    while (!env.terminal()) {
      auto s = env.observe();
      ASSERT_EQ(s.candidates.size(), 30u);
      for (int v = 0; v < 30; ++v) {
        auto flipped = env.spins();
        flipped[v] = -flipped[v];
        ASSERT_EQ(s.candidates[v].features[kFlipGain],
                  cut_value(*graph, flipped) - cut_value(*graph, env.spins()));
        ASSERT_EQ(s.candidates[v].features[kDegree], graph->degree(v));
        ASSERT_EQ(s.candidates[v].features[kBestGap], env.best_cut() - env.current_cut());
      }
      env.step(ActionId{static_cast<std::int64_t>(pick() % 30)});
      ASSERT_EQ(env.current_cut(), cut_value(*graph, env.spins()));
      ASSERT_GE(env.best_cut(), best);
      best = env.best_cut();
    }
    EXPECT_EQ(env.objective(), env.recompute_objective());
  }
}

TEST(MaxCut, BestCutBoundedByExhaustiveOptimum) {
  auto greedy = program_selector(dsl::HeuristicProgram::parse("flip_gain", feature_schema()));
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const int n = 4 + seed % 11;
    auto g = seed % 2 ? generate_er(n, 0.4, Weighting::kSigned, rng)
                      : generate_ba(n, 2, Weighting::kUnit, rng);
    const double opt = oracle::maxcut_optimum(g);
    auto r = rollout(greedy, ProblemInstance(g), SamplingPlan::none(), seed);
    EXPECT_LE(-r.objective, opt);
  }
}

TEST(MaxCut, Generators) {
  Rng rng(1);
  auto tree = generate_ba(5, 1, Weighting::kUnit, rng);
  EXPECT_EQ(tree.edges.size(), 4u);
  // Connected: a union-find over 4 edges on 5 vertices leaves one root.
  std::vector<int> parent(5);
  for (int i = 0; i < 5; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (const auto& e : tree.edges) parent[find(e.u)] = find(e.v);
  std::set<int> roots;
  for (int i = 0; i < 5; ++i) roots.insert(find(i));
  EXPECT_EQ(roots.size(), 1u);

  auto ba = generate_ba(200, 4, Weighting::kSigned, rng);
  EXPECT_EQ(ba.edges.size(), 4u + (200u - 5u) * 4u);
  for (const auto& e : ba.edges) EXPECT_TRUE(e.w == 1.0 || e.w == -1.0);

  EXPECT_TRUE(generate_er(50, 0.0, Weighting::kUnit, rng).edges.empty());
  const double pairs = 200.0 * 199.0 / 2.0;
  const double mean = pairs * 0.05, sigma = std::sqrt(pairs * 0.05 * 0.95);
  // Sample mean over k graphs has standard error sigma / sqrt(k).
  const int k = 200;
  double total = 0;
  for (int s = 0; s < k; ++s) {
    Rng r(1000 + s);
    total += static_cast<double>(generate_er(200, 0.05, Weighting::kUnit, r).edges.size());
  }
  EXPECT_LE(std::abs(total / k - mean), 3 * sigma / std::sqrt(k));
  EXPECT_THROW(generate_ba(5, 0, Weighting::kUnit, rng), std::invalid_argument);
  EXPECT_THROW(generate_ba(5, 5, Weighting::kUnit, rng), std::invalid_argument);
  EXPECT_THROW(generate_er(5, 1.5, Weighting::kUnit, rng), std::invalid_argument);
}

TEST(MaxCut, InitialSpins) {
  EXPECT_EQ(initial_spins(3, 42), initial_spins(3, 42));
  EXPECT_EQ(initial_spins(4, 42, true), (std::vector<int>{1, 1, 1, 1}));
  Rng rng(3);
  auto g = generate_er(40, 0.3, Weighting::kUnit, rng);
  double total = 0;
  for (int s = 0; s < 1000; ++s) total += cut_value(g, initial_spins(40, s));
  // Each edge is cut with probability 1/2; per-run variance <= |E|/4.
  const double m = static_cast<double>(g.edges.size());
  EXPECT_NEAR(total / 1000.0, m / 2.0, 4 * std::sqrt(m / 4.0 / 1000.0) + 1e-9);
}

TEST(MaxCut, EdgeListRoundTrip) {
  Rng rng(9);
  auto g = generate_ba(60, 3, Weighting::kSigned, rng);
  std::stringstream ss;
  write_edge_list(ss, g);
  const std::string text = ss.str();
  auto back = read_edge_list(ss);
  ASSERT_EQ(back.n, g.n);
  ASSERT_EQ(back.edges.size(), g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    EXPECT_EQ(back.edges[i].u, g.edges[i].u);
    EXPECT_EQ(back.edges[i].v, g.edges[i].v);
    EXPECT_EQ(back.edges[i].w, g.edges[i].w);
  }
  std::stringstream again;
  write_edge_list(again, back);
  EXPECT_EQ(again.str(), text);
  std::istringstream frac("# comment\n3 2\n0 1 0.1\n\n1 2 2.5e-3\n");
  auto f = read_edge_list(frac);
  EXPECT_EQ(f.edges[0].w, 0.1);
  EXPECT_EQ(f.edges[1].w, 2.5e-3);
  std::istringstream loop("2 1\n1 1 1\n");
  EXPECT_THROW(read_edge_list(loop), std::invalid_argument);
  std::istringstream dup("3 2\n0 1 1\n1 0 1\n");
  EXPECT_THROW(read_edge_list(dup), std::invalid_argument);
}

}  // namespace
}  // namespace heurevo::maxcut
