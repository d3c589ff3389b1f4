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

#ifndef HEUREVO_TASKS_MAXCUT_HPP_
#define HEUREVO_TASKS_MAXCUT_HPP_

#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "heurevo/dsl/schema.hpp"
#include "heurevo/engine/environment.hpp"

namespace heurevo {
class Rng;
}

namespace heurevo::maxcut {

struct Edge {
  int u;
  int v;
  double w;
};

// Undirected weighted graph, no self-loops or parallel edges.
struct MaxCutInstance {
  std::string name;
  int n = 0;
  std::vector<Edge> edges;

  // Throws std::invalid_argument on bad endpoints, self-loops, duplicate
  // edges or non-finite weights.
  static MaxCutInstance make(int n, std::vector<Edge> edges, std::string name = {});

  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }
  // Neighbours of v: [begin, end) into neighbors()/weights().
  int adj_begin(int v) const { return offsets_[v]; }
  int adj_end(int v) const { return offsets_[v + 1]; }
  const std::vector<int>& neighbors() const { return nbr_; }
  const std::vector<double>& weights() const { return wts_; }

 private:
  std::vector<int> offsets_;
  std::vector<int> nbr_;
  std::vector<double> wts_;
};

const dsl::FeatureSchema& feature_schema();

enum Feature : std::size_t {
  kFlipGain,
  kStepsSinceFlip,
  kDegree,
  kSpin,
  kFracStepsElapsed,
  kBestGap,
  kNumFeatures,
};

// Sum of weights of edges whose endpoints have different spins.
double cut_value(const MaxCutInstance& graph, const std::vector<int>& spins);

// Uniform +-1 spins from `seed`, or all +1 when `all_plus` is set.
std::vector<int> initial_spins(int n, std::uint64_t seed, bool all_plus = false);

// Flip local search. Every vertex is a candidate at every step; the episode
// ends after max_steps flips and reports -best_cut.
class MaxCutEnvironment final : public Environment {
 public:
  MaxCutEnvironment(std::shared_ptr<const MaxCutInstance> instance,
                    std::vector<int> spins, int max_steps);

  TaskKind task() const override { return TaskKind::kMaxCut; }
  bool terminal() const override { return steps_ >= max_steps_; }
  int step_count() const override { return steps_; }
  EpisodeState observe() const override;
  void step(ActionId action) override;
  double objective() const override { return -best_cut_; }
  double recompute_objective() const override;
  std::size_t horizon_hint() const override {
    return static_cast<std::size_t>(max_steps_);
  }

  double current_cut() const { return cut_; }
  double best_cut() const { return best_cut_; }
  double gain(int v) const { return gain_[v]; }
  const std::vector<int>& spins() const { return spins_; }
  const std::vector<int>& best_spins() const { return best_spins_; }

 private:
  std::shared_ptr<const MaxCutInstance> instance_;
  std::vector<int> spins_;
  std::vector<int> best_spins_;
  std::vector<double> gain_;
  std::vector<int> last_flip_;
  double cut_ = 0.0;
  double best_cut_ = 0.0;
  int max_steps_;
  int steps_ = 0;
};

enum class Weighting {
  kUnit,    // "u": all weights 1
  kSigned,  // "w": weights uniform from {-1, +1}
};
std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view name);

// Preferential attachment: star on m+1 vertices, then each new vertex joins
// m distinct targets drawn proportionally to degree. Requires 1 <= m < n.
MaxCutInstance generate_ba(int n, int m, Weighting weighting, Rng& rng);
// G(n, p).
MaxCutInstance generate_er(int n, double p, Weighting weighting, Rng& rng);

// "n m" then m lines "u v w", 0-indexed. Blank lines and '#' comments are
// ignored.
MaxCutInstance read_edge_list(std::istream& in, std::string name = {});
MaxCutInstance read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const MaxCutInstance& graph);

}  // namespace heurevo::maxcut

#endif  // HEUREVO_TASKS_MAXCUT_HPP_
