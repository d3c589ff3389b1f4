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

#ifndef HEUREVO_HARNESS_INSTANCES_HPP_
#define HEUREVO_HARNESS_INSTANCES_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "heurevo/engine/instance.hpp"

namespace heurevo::harness {

// Where a set of instances comes from. Generators are seeded per instance
// with mix_seed(seed, i).
struct InstanceSpec {
  std::string name;
  // jssp: random | taillard; tsp/cvrp: uniform; maxcut: ba | er;
  // any task: files | dir.
  std::string kind;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  int jobs = 0, machines = 0;
  std::vector<int> taillard_ids;
  int nodes = 0;
  int customers = 0;
  double capacity = 0.0;  // 0 = default for the size
  int n = 0, m = 0;
  double p = 0.0;
  maxcut::Weighting weighting = maxcut::Weighting::kUnit;
  // files: the paths; dir: one directory.
  std::vector<std::string> paths;
};

// Compact command-line form "<kind>[:k=v,...]", e.g.
//   taillard:ids=21-30   random:jobs=20,machines=20,count=10,seed=1
//   uniform:nodes=50,count=64,seed=3   ba:n=200,m=4,weighting=w,count=5
//   files:a.txt,b.txt    dir:instances/tsp50,seed=1
// File sources accept seed= and name=; the seed drives episode seeds.
// Throws std::invalid_argument.
InstanceSpec parse_instance_spec(std::string_view text);

// Default set name: kind plus the size parameters.
std::string default_set_name(TaskKind task, const InstanceSpec& spec);

InstanceSet build_instance_set(TaskKind task, const InstanceSpec& spec, Split split);

// Native file format of the task: Taillard text, TSPLIB, edge list.
ProblemInstance read_instance_file(TaskKind task, const std::string& path);
void write_instance_file(const ProblemInstance& instance, const std::string& path);
std::string_view instance_extension(TaskKind task);

// Writes every instance to `dir` as <name><ext>; returns the paths.
std::vector<std::string> write_instance_set(const InstanceSet& set, const std::string& dir);

// Default CVRP capacity by customer count (20: 30, 50: 40, 100+: 50).
double default_cvrp_capacity(int customers);

}  // namespace heurevo::harness

#endif  // HEUREVO_HARNESS_INSTANCES_HPP_
