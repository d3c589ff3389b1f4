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

#ifndef HEUREVO_TASKS_ROUTING_HPP_
#define HEUREVO_TASKS_ROUTING_HPP_

#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "heurevo/dsl/schema.hpp"
#include "heurevo/engine/environment.hpp"

namespace heurevo {
class Rng;
}

namespace heurevo::routing {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Euclidean routing instance. For CVRP node 0 is the depot, demands[0] = 0
// and every customer demand fits the vehicle capacity.
struct RoutingInstance {
  TaskKind task = TaskKind::kTsp;
  std::string name;
  std::vector<Point> coords;
  std::vector<double> demands;  // CVRP only
  double capacity = 0.0;        // CVRP only

  static RoutingInstance make(TaskKind task, std::vector<Point> coords,
                              std::vector<double> demands = {},
                              double capacity = 0.0, std::string name = {});

  std::size_t size() const { return coords.size(); }
  double dist(std::size_t i, std::size_t j) const { return dist_[i * coords.size() + j]; }
  void validate() const;

 private:
  std::vector<double> dist_;
};

const dsl::FeatureSchema& tsp_schema();
const dsl::FeatureSchema& cvrp_schema();

namespace tsp_f {
enum : std::size_t {
  kDistFromCurrent,
  kDistToDestination,
  kFracUnvisited,
  kMeanDistToUnvisited,
  kNum,
};
}

namespace cvrp_f {
enum : std::size_t {
  kDistFromCurrent,
  kDistToDepot,
  kDemand,
  kRestCapacityAfter,
  kFracUnvisited,
  kIsRestart,
  kMeanDistToUnvisited,
  kNum,
};
}

// Closed-tour construction from node 0. Action id = node index.
class TspEnvironment final : public Environment {
 public:
  explicit TspEnvironment(std::shared_ptr<const RoutingInstance> instance);

  TaskKind task() const override { return TaskKind::kTsp; }
  bool terminal() const override { return unvisited_ == 0; }
  int step_count() const override { return steps_; }
  EpisodeState observe() const override;
  void step(ActionId action) override;
  double objective() const override;
  double recompute_objective() const override;
  std::size_t horizon_hint() const override;

  const std::vector<int>& tour() const { return tour_; }

 private:
  void visit(int node);

  std::shared_ptr<const RoutingInstance> instance_;
  std::vector<char> visited_;
  std::vector<double> sum_to_unvisited_;
  std::vector<int> tour_;
  std::size_t unvisited_ = 0;
  double length_ = 0.0;
  int steps_ = 0;
};

// Capacitated construction. Candidates: the depot-restart action (id 0)
// whenever the vehicle is away from the depot, then every unserved customer
// whose demand fits the remaining capacity.
class CvrpEnvironment final : public Environment {
 public:
  explicit CvrpEnvironment(std::shared_ptr<const RoutingInstance> instance);

  TaskKind task() const override { return TaskKind::kCvrp; }
  bool terminal() const override { return unserved_ == 0 && current_ == 0; }
  int step_count() const override { return steps_; }
  EpisodeState observe() const override;
  void step(ActionId action) override;
  double objective() const override { return length_; }
  double recompute_objective() const override;
  std::size_t horizon_hint() const override;

  double rest_capacity() const { return rest_; }
  // Visit sequence starting and (when terminal) ending at the depot.
  const std::vector<int>& sequence() const { return sequence_; }

 private:
  std::shared_ptr<const RoutingInstance> instance_;
  std::vector<char> served_;
  std::vector<double> sum_to_unserved_;
  std::vector<int> sequence_;
  std::size_t unserved_ = 0;
  int current_ = 0;
  double rest_ = 0.0;
  double length_ = 0.0;
  int steps_ = 0;
};

// Coordinates uniform in [0,1]^2.
RoutingInstance generate_tsp(int nodes, Rng& rng);
// Depot and `customers` uniform in [0,1]^2; integer demands uniform in
// [demand_lo, demand_hi].
RoutingInstance generate_cvrp(int customers, double capacity, Rng& rng,
                              int demand_lo = 1, int demand_hi = 9);

// TSPLIB subset: TYPE (TSP/CVRP), DIMENSION, EDGE_WEIGHT_TYPE EUC_2D,
// CAPACITY, NODE_COORD_SECTION, DEMAND_SECTION, DEPOT_SECTION. Other
// sections are skipped with a warning. Nodes are renumbered so the depot is
// index 0.
RoutingInstance read_tsplib(std::istream& in, std::string name = {});
RoutingInstance read_tsplib_file(const std::string& path);
void write_tsplib(std::ostream& out, const RoutingInstance& instance);

}  // namespace heurevo::routing

#endif  // HEUREVO_TASKS_ROUTING_HPP_
