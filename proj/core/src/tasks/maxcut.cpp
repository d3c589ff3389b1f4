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

#include "heurevo/tasks/maxcut.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "heurevo/util/random.hpp"

namespace heurevo::maxcut {

MaxCutInstance MaxCutInstance::make(int n, std::vector<Edge> edges, std::string name) {
  if (n < 1) throw std::invalid_argument("MaxCut graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw std::invalid_argument(fmt::format("edge ({}, {}) outside [0, {})", e.u, e.v, n));
    }
    if (e.u == e.v) throw std::invalid_argument(fmt::format("self-loop at vertex {}", e.u));
    if (!std::isfinite(e.w)) throw std::invalid_argument("non-finite edge weight");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw std::invalid_argument(fmt::format("duplicate edge ({}, {})", e.u, e.v));
    }
  }
  MaxCutInstance g;
  g.name = std::move(name);
  g.n = n;
  g.edges = std::move(edges);
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : g.edges) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (int v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
  g.nbr_.resize(2 * g.edges.size());
  g.wts_.resize(2 * g.edges.size());
  std::vector<int> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : g.edges) {
    g.nbr_[fill[e.u]] = e.v;
    g.wts_[fill[e.u]++] = e.w;
    g.nbr_[fill[e.v]] = e.u;
    g.wts_[fill[e.v]++] = e.w;
  }
  return g;
}

const dsl::FeatureSchema& feature_schema() {
  static const dsl::FeatureSchema schema(
      TaskKind::kMaxCut,
      {
          {"flip_gain", "change in cut value if the vertex is flipped"},
          {"steps_since_flip", "steps since the vertex was last flipped (n+1 if never)"},
          {"degree", "number of incident edges"},
          {"spin", "current side of the vertex, +1 or -1"},
          {"frac_steps_elapsed", "fraction of the flip budget already used"},
          {"best_gap", "best cut so far minus the current cut"},
      });
  return schema;
}

double cut_value(const MaxCutInstance& graph, const std::vector<int>& spins) {
  double cut = 0.0;
  for (const auto& e : graph.edges) {
    if (spins[e.u] != spins[e.v]) cut += e.w;
  }
  return cut;
}

std::vector<int> initial_spins(int n, std::uint64_t seed, bool all_plus) {
  std::vector<int> spins(static_cast<std::size_t>(n), 1);
  if (all_plus) return spins;
  Rng rng(seed);
  for (auto& s : spins) s = rng.bernoulli(0.5) ? 1 : -1;
  return spins;
}

MaxCutEnvironment::MaxCutEnvironment(std::shared_ptr<const MaxCutInstance> instance,
                                     std::vector<int> spins, int max_steps)
    : instance_(std::move(instance)), spins_(std::move(spins)), max_steps_(max_steps) {
  const int n = instance_->n;
  if (static_cast<int>(spins_.size()) != n) {
    throw std::invalid_argument("spin vector size does not match the graph");
  }
  for (int s : spins_) {
    if (s != 1 && s != -1) throw std::invalid_argument("spins must be +1 or -1");
  }
  if (max_steps_ < 0) throw std::invalid_argument("max_steps must be non-negative");
  gain_.assign(static_cast<std::size_t>(n), 0.0);
  const auto& nbr = instance_->neighbors();
  const auto& wts = instance_->weights();
  for (int v = 0; v < n; ++v) {
    for (int k = instance_->adj_begin(v); k < instance_->adj_end(v); ++k) {
      gain_[v] += spins_[nbr[k]] == spins_[v] ? wts[k] : -wts[k];
    }
  }
  last_flip_.assign(static_cast<std::size_t>(n), -1);
  cut_ = cut_value(*instance_, spins_);
  best_cut_ = cut_;
  best_spins_ = spins_;
}

EpisodeState MaxCutEnvironment::observe() const {
  EpisodeState state;
  state.task = TaskKind::kMaxCut;
  state.step = steps_;
  const int n = instance_->n;
  const double frac = max_steps_ > 0 ? static_cast<double>(steps_) / max_steps_ : 1.0;
  state.candidates.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    FeatureVector f(kNumFeatures);
    f[kFlipGain] = gain_[v];
    f[kStepsSinceFlip] = last_flip_[v] < 0 ? n + 1.0 : steps_ - last_flip_[v];
    f[kDegree] = instance_->degree(v);
    f[kSpin] = spins_[v];
    f[kFracStepsElapsed] = frac;
    f[kBestGap] = best_cut_ - cut_;
    state.candidates.push_back({ActionId{v}, std::move(f)});
  }
  state.context = {
      {"current_cut", cut_},
      {"best_cut", best_cut_},
      {"step", static_cast<double>(steps_)},
      {"max_steps", static_cast<double>(max_steps_)},
      {"n", static_cast<double>(n)},
  };
  return state;
}

void MaxCutEnvironment::step(ActionId action) {
  const auto id = to_int(action);
  if (terminal()) throw InfeasibleAction("MaxCut episode already finished");
  if (id < 0 || id >= instance_->n) {
    throw InfeasibleAction(fmt::format("vertex {} outside [0, {})", id, instance_->n));
  }
  const int v = static_cast<int>(id);
  cut_ += gain_[v];
  gain_[v] = -gain_[v];
  spins_[v] = -spins_[v];
  const auto& nbr = instance_->neighbors();
  const auto& wts = instance_->weights();
  for (int k = instance_->adj_begin(v); k < instance_->adj_end(v); ++k) {
    const int u = nbr[k];
    gain_[u] += spins_[u] == spins_[v] ? 2.0 * wts[k] : -2.0 * wts[k];
  }
  last_flip_[v] = steps_;
  ++steps_;
  if (cut_ > best_cut_) {
    best_cut_ = cut_;
    best_spins_ = spins_;
  }
}

double MaxCutEnvironment::recompute_objective() const {
  return -cut_value(*instance_, best_spins_);
}

std::string_view to_string(Weighting w) { return w == Weighting::kUnit ? "u" : "w"; }

Weighting parse_weighting(std::string_view name) {
  if (name == "u" || name == "unit") return Weighting::kUnit;
  if (name == "w" || name == "signed") return Weighting::kSigned;
  throw std::invalid_argument(fmt::format("unknown weighting '{}' (expected u or w)", name));
}

namespace {

double draw_weight(Weighting weighting, Rng& rng) {
  return weighting == Weighting::kUnit ? 1.0 : (rng.bernoulli(0.5) ? 1.0 : -1.0);
}

}  // namespace

MaxCutInstance generate_ba(int n, int m, Weighting weighting, Rng& rng) {
  if (m < 1 || m >= n) {
    throw std::invalid_argument(fmt::format("BA graph needs 1 <= m < n (m={}, n={})", m, n));
  }
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> repeated;
  for (int v = 1; v <= m; ++v) {
    pairs.emplace_back(0, v);
    repeated.push_back(0);
    repeated.push_back(v);
  }
  for (int source = m + 1; source < n; ++source) {
    std::vector<int> targets;
    while (static_cast<int>(targets.size()) < m) {
      const int x = repeated[rng.below(repeated.size())];
      if (std::find(targets.begin(), targets.end(), x) == targets.end()) targets.push_back(x);
    }
    for (int t : targets) {
      pairs.emplace_back(t, source);
      repeated.push_back(t);
      repeated.push_back(source);
    }
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) edges.push_back({u, v, draw_weight(weighting, rng)});
  return MaxCutInstance::make(n, std::move(edges));
}

MaxCutInstance generate_er(int n, double p, Weighting weighting, Rng& rng) {
  if (n < 1) throw std::invalid_argument("ER graph needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ER edge probability outside [0, 1]");
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) edges.push_back({u, v, 0.0});
    }
  }
  for (auto& e : edges) e.w = draw_weight(weighting, rng);
  return MaxCutInstance::make(n, std::move(edges));
}

MaxCutInstance read_edge_list(std::istream& in, std::string name) {
  std::string line;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      const auto hash = out.find('#');
      if (hash != std::string::npos) out.resize(hash);
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line(line)) throw std::runtime_error("edge list: missing 'n m' header");
  long n = 0, m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m) || n < 1 || m < 0) {
      throw std::runtime_error("edge list: bad header '" + line + "'");
    }
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) {
    if (!next_line(line)) {
      throw std::runtime_error(fmt::format("edge list: expected {} edges, found {}", m, i));
    }
    std::istringstream ls(line);
    Edge e{};
    if (!(ls >> e.u >> e.v >> e.w)) throw std::runtime_error("edge list: bad edge '" + line + "'");
    edges.push_back(e);
  }
  if (next_line(line)) throw std::runtime_error("edge list: trailing data after edges");
  return MaxCutInstance::make(static_cast<int>(n), std::move(edges), std::move(name));
}

MaxCutInstance read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  auto slash = path.find_last_of('/');
  return read_edge_list(in, path.substr(slash == std::string::npos ? 0 : slash + 1));
}

void write_edge_list(std::ostream& out, const MaxCutInstance& graph) {
  out << graph.n << ' ' << graph.edges.size() << '\n';
  for (const auto& e : graph.edges) out << fmt::format("{} {} {}\n", e.u, e.v, e.w);
}

}  // namespace heurevo::maxcut
