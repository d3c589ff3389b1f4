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

#include "heurevo/tasks/routing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "heurevo/util/random.hpp"

namespace heurevo::routing {

RoutingInstance RoutingInstance::make(TaskKind task, std::vector<Point> coords,
                                      std::vector<double> demands,
                                      double capacity, std::string name) {
  if (task != TaskKind::kTsp && task != TaskKind::kCvrp) {
    throw std::invalid_argument("RoutingInstance: task must be tsp or cvrp");
  }
  RoutingInstance inst;
  inst.task = task;
  inst.name = std::move(name);
  inst.coords = std::move(coords);
  inst.demands = std::move(demands);
  inst.capacity = capacity;
  const std::size_t n = inst.coords.size();
  inst.dist_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(inst.coords[i].x - inst.coords[j].x,
                                  inst.coords[i].y - inst.coords[j].y);
      inst.dist_[i * n + j] = d;
      inst.dist_[j * n + i] = d;
    }
  }
  inst.validate();
  return inst;
}

void RoutingInstance::validate() const {
  if (coords.empty()) throw std::invalid_argument("routing instance has no nodes");
  for (const auto& p : coords) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("routing instance has non-finite coordinates");
    }
  }
  if (task == TaskKind::kCvrp) {
    if (!(capacity > 0.0)) throw std::invalid_argument("CVRP capacity must be positive");
    if (demands.size() != coords.size()) {
      throw std::invalid_argument("CVRP demands must cover every node");
    }
    if (demands[0] != 0.0) throw std::invalid_argument("CVRP depot demand must be 0");
    for (std::size_t i = 1; i < demands.size(); ++i) {
      if (!(demands[i] > 0.0) || demands[i] > capacity) {
        throw std::invalid_argument(fmt::format(
            "CVRP customer {} demand {} outside (0, capacity]", i, demands[i]));
      }
    }
  }
}

const dsl::FeatureSchema& tsp_schema() {
  static const dsl::FeatureSchema schema(
      TaskKind::kTsp,
      {
          {"dist_from_current", "distance from the current node to the candidate"},
          {"dist_to_destination", "distance from the candidate back to the start node"},
          {"frac_unvisited", "fraction of nodes not yet visited"},
          {"mean_dist_to_unvisited", "mean distance from the candidate to the other unvisited nodes"},
      });
  return schema;
}

const dsl::FeatureSchema& cvrp_schema() {
  static const dsl::FeatureSchema schema(
      TaskKind::kCvrp,
      {
          {"dist_from_current", "distance from the current node to the candidate"},
          {"dist_to_depot", "distance from the candidate to the depot (0 for restart)"},
          {"demand", "customer demand (0 for restart)"},
          {"rest_capacity_after", "vehicle capacity left after taking the candidate"},
          {"frac_unvisited", "fraction of customers not yet served"},
          {"is_restart", "1 for the depot-restart action, else 0"},
          {"mean_dist_to_unvisited", "mean distance from the candidate to the other unserved customers"},
      });
  return schema;
}

TspEnvironment::TspEnvironment(std::shared_ptr<const RoutingInstance> instance)
    : instance_(std::move(instance)) {
  const std::size_t n = instance_->size();
  visited_.assign(n, 0);
  sum_to_unvisited_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t u = 1; u < n; ++u) sum_to_unvisited_[i] += instance_->dist(i, u);
  }
  unvisited_ = n;
  visited_[0] = 1;
  --unvisited_;
  tour_.push_back(0);
  if (unvisited_ == 0) length_ = 0.0;
}

std::size_t TspEnvironment::horizon_hint() const {
  return instance_->size() > 0 ? instance_->size() - 1 : 0;
}

void TspEnvironment::visit(int node) {
  visited_[node] = 1;
  --unvisited_;
  for (std::size_t i = 0; i < instance_->size(); ++i) {
    sum_to_unvisited_[i] -= instance_->dist(i, static_cast<std::size_t>(node));
  }
  tour_.push_back(node);
}

EpisodeState TspEnvironment::observe() const {
  EpisodeState state;
  state.task = TaskKind::kTsp;
  state.step = steps_;
  const std::size_t n = instance_->size();
  const auto cur = static_cast<std::size_t>(tour_.back());
  const double frac = static_cast<double>(unvisited_) / static_cast<double>(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (visited_[c]) continue;
    FeatureVector f(tsp_f::kNum);
    f[tsp_f::kDistFromCurrent] = instance_->dist(cur, c);
    f[tsp_f::kDistToDestination] = instance_->dist(c, 0);
    f[tsp_f::kFracUnvisited] = frac;
    f[tsp_f::kMeanDistToUnvisited] =
        unvisited_ > 1 ? std::max(0.0, sum_to_unvisited_[c]) /
                             static_cast<double>(unvisited_ - 1)
                       : 0.0;
    state.candidates.push_back({ActionId{static_cast<std::int64_t>(c)}, std::move(f)});
  }
  state.context = {
      {"current_node", static_cast<double>(cur)},
      {"destination_node", 0.0},
      {"num_unvisited", static_cast<double>(unvisited_)},
      {"tour_length_so_far", length_},
  };
  return state;
}

void TspEnvironment::step(ActionId action) {
  const auto node = to_int(action);
  if (node < 0 || node >= static_cast<std::int64_t>(instance_->size()) ||
      visited_[static_cast<std::size_t>(node)]) {
    throw InfeasibleAction(fmt::format("TSP node {} is not an unvisited node", node));
  }
  length_ += instance_->dist(static_cast<std::size_t>(tour_.back()),
                             static_cast<std::size_t>(node));
  visit(static_cast<int>(node));
  ++steps_;
  if (unvisited_ == 0) {
    length_ += instance_->dist(static_cast<std::size_t>(node), 0);
  }
}

double TspEnvironment::objective() const { return length_; }

double TspEnvironment::recompute_objective() const {
  double total = 0.0;
  for (std::size_t i = 1; i < tour_.size(); ++i) {
    total += instance_->dist(static_cast<std::size_t>(tour_[i - 1]),
                             static_cast<std::size_t>(tour_[i]));
  }
  if (unvisited_ == 0 && tour_.size() > 1) {
    total += instance_->dist(static_cast<std::size_t>(tour_.back()), 0);
  }
  return total;
}

CvrpEnvironment::CvrpEnvironment(std::shared_ptr<const RoutingInstance> instance)
    : instance_(std::move(instance)) {
  if (instance_->task != TaskKind::kCvrp) {
    throw std::invalid_argument("CvrpEnvironment needs a CVRP instance");
  }
  const std::size_t n = instance_->size();
  served_.assign(n, 0);
  served_[0] = 1;
  unserved_ = n - 1;
  sum_to_unserved_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t u = 1; u < n; ++u) sum_to_unserved_[i] += instance_->dist(i, u);
  }
  rest_ = instance_->capacity;
  sequence_.push_back(0);
}

std::size_t CvrpEnvironment::horizon_hint() const {
  double total = 0.0;
  for (double d : instance_->demands) total += d;
  const auto routes =
      static_cast<std::size_t>(std::ceil(total / instance_->capacity));
  return instance_->size() - 1 + routes;
}

EpisodeState CvrpEnvironment::observe() const {
  EpisodeState state;
  state.task = TaskKind::kCvrp;
  state.step = steps_;
  const std::size_t n = instance_->size();
  const auto cur = static_cast<std::size_t>(current_);
  const double customers = static_cast<double>(n - 1);
  const double frac = customers > 0 ? static_cast<double>(unserved_) / customers : 0.0;
  if (current_ != 0) {
    FeatureVector f(cvrp_f::kNum);
    f[cvrp_f::kDistFromCurrent] = instance_->dist(cur, 0);
    f[cvrp_f::kDistToDepot] = 0.0;
    f[cvrp_f::kDemand] = 0.0;
    f[cvrp_f::kRestCapacityAfter] = instance_->capacity;
    f[cvrp_f::kFracUnvisited] = frac;
    f[cvrp_f::kIsRestart] = 1.0;
    f[cvrp_f::kMeanDistToUnvisited] =
        unserved_ > 0 ? std::max(0.0, sum_to_unserved_[0]) / static_cast<double>(unserved_)
                      : 0.0;
    state.candidates.push_back({ActionId{0}, std::move(f)});
  }
  for (std::size_t c = 1; c < n; ++c) {
    if (served_[c] || instance_->demands[c] > rest_) continue;
    FeatureVector f(cvrp_f::kNum);
    f[cvrp_f::kDistFromCurrent] = instance_->dist(cur, c);
    f[cvrp_f::kDistToDepot] = instance_->dist(c, 0);
    f[cvrp_f::kDemand] = instance_->demands[c];
    f[cvrp_f::kRestCapacityAfter] = rest_ - instance_->demands[c];
    f[cvrp_f::kFracUnvisited] = frac;
    f[cvrp_f::kIsRestart] = 0.0;
    f[cvrp_f::kMeanDistToUnvisited] =
        unserved_ > 1 ? std::max(0.0, sum_to_unserved_[c]) /
                            static_cast<double>(unserved_ - 1)
                      : 0.0;
    state.candidates.push_back({ActionId{static_cast<std::int64_t>(c)}, std::move(f)});
  }
  state.context = {
      {"current_node", static_cast<double>(current_)},
      {"rest_capacity", rest_},
      {"capacity", instance_->capacity},
      {"num_unserved", static_cast<double>(unserved_)},
      {"route_length_so_far", length_},
  };
  return state;
}

void CvrpEnvironment::step(ActionId action) {
  const auto node = to_int(action);
  const std::size_t n = instance_->size();
  if (node == 0) {
    if (current_ == 0) throw InfeasibleAction("CVRP restart while at the depot");
    length_ += instance_->dist(static_cast<std::size_t>(current_), 0);
    current_ = 0;
    rest_ = instance_->capacity;
  } else {
    if (node < 0 || node >= static_cast<std::int64_t>(n) ||
        served_[static_cast<std::size_t>(node)]) {
      throw InfeasibleAction(fmt::format("CVRP node {} is not an unserved customer", node));
    }
    const auto c = static_cast<std::size_t>(node);
    if (instance_->demands[c] > rest_) {
      throw InfeasibleAction(fmt::format("CVRP customer {} demand {} exceeds capacity {}",
                                         node, instance_->demands[c], rest_));
    }
    length_ += instance_->dist(static_cast<std::size_t>(current_), c);
    rest_ -= instance_->demands[c];
    served_[c] = 1;
    --unserved_;
    for (std::size_t i = 0; i < n; ++i) sum_to_unserved_[i] -= instance_->dist(i, c);
    current_ = static_cast<int>(node);
  }
  sequence_.push_back(static_cast<int>(node));
  ++steps_;
}

double CvrpEnvironment::recompute_objective() const {
  double total = 0.0;
  for (std::size_t i = 1; i < sequence_.size(); ++i) {
    total += instance_->dist(static_cast<std::size_t>(sequence_[i - 1]),
                             static_cast<std::size_t>(sequence_[i]));
  }
  return total;
}

RoutingInstance generate_tsp(int nodes, Rng& rng) {
  if (nodes < 1) throw std::invalid_argument("generate_tsp: nodes must be >= 1");
  std::vector<Point> pts(static_cast<std::size_t>(nodes));
  for (auto& p : pts) {
    p.x = rng.uniform01();
    p.y = rng.uniform01();
  }
  return RoutingInstance::make(TaskKind::kTsp, std::move(pts));
}

RoutingInstance generate_cvrp(int customers, double capacity, Rng& rng,
                              int demand_lo, int demand_hi) {
  if (customers < 0) throw std::invalid_argument("generate_cvrp: customers must be >= 0");
  if (demand_lo < 1 || demand_hi < demand_lo || demand_hi > capacity) {
    throw std::invalid_argument("generate_cvrp: demand range must lie in [1, capacity]");
  }
  std::vector<Point> pts(static_cast<std::size_t>(customers) + 1);
  for (auto& p : pts) {
    p.x = rng.uniform01();
    p.y = rng.uniform01();
  }
  std::vector<double> demands(pts.size(), 0.0);
  for (std::size_t i = 1; i < demands.size(); ++i) {
    demands[i] = static_cast<double>(rng.uniform_int(demand_lo, demand_hi));
  }
  return RoutingInstance::make(TaskKind::kCvrp, std::move(pts), std::move(demands),
                               capacity);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

RoutingInstance read_tsplib(std::istream& in, std::string name) {
  enum class Section { kNone, kCoords, kDemands, kDepots, kSkip };
  Section section = Section::kNone;
  std::string type = "TSP";
  std::string weight_type = "EUC_2D";
  long dimension = -1;
  double capacity = 0.0;
  std::vector<std::pair<long, Point>> coords;
  std::map<long, double> demands;
  std::vector<long> depots;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (std::isalpha(static_cast<unsigned char>(line[0]))) {
      const auto colon = line.find(':');
      const std::string key = upper(trim(line.substr(0, colon)));
      const std::string value = colon == std::string::npos ? "" : trim(line.substr(colon + 1));
      if (key == "EOF") break;
      if (colon != std::string::npos) {
        section = Section::kNone;
        if (key == "NAME") {
          if (name.empty()) name = value;
        } else if (key == "TYPE") {
          type = upper(value);
        } else if (key == "DIMENSION") {
          dimension = std::stol(value);
        } else if (key == "EDGE_WEIGHT_TYPE") {
          weight_type = upper(value);
        } else if (key == "CAPACITY") {
          capacity = std::stod(value);
        } else if (key != "COMMENT") {
          spdlog::warn("TSPLIB: ignoring header '{}'", key);
        }
        continue;
      }
      if (key == "NODE_COORD_SECTION") {
        section = Section::kCoords;
      } else if (key == "DEMAND_SECTION") {
        section = Section::kDemands;
      } else if (key == "DEPOT_SECTION") {
        section = Section::kDepots;
      } else {
        spdlog::warn("TSPLIB: skipping unsupported section '{}'", key);
        section = Section::kSkip;
      }
      continue;
    }
    std::istringstream ls(line);
    switch (section) {
      case Section::kCoords: {
        long id;
        Point p;
        if (!(ls >> id >> p.x >> p.y)) throw std::runtime_error("TSPLIB: bad coordinate line '" + line + "'");
        coords.emplace_back(id, p);
        break;
      }
      case Section::kDemands: {
        long id;
        double d;
        if (!(ls >> id >> d)) throw std::runtime_error("TSPLIB: bad demand line '" + line + "'");
        demands[id] = d;
        break;
      }
      case Section::kDepots: {
        long id;
        while (ls >> id) {
          if (id >= 0) depots.push_back(id);
        }
        break;
      }
      case Section::kSkip:
        break;
      case Section::kNone:
        throw std::runtime_error("TSPLIB: data outside a section: '" + line + "'");
    }
  }
  if (weight_type != "EUC_2D") {
    throw std::runtime_error("TSPLIB: unsupported EDGE_WEIGHT_TYPE " + weight_type);
  }
  if (coords.empty()) throw std::runtime_error("TSPLIB: missing NODE_COORD_SECTION");
  if (dimension >= 0 && static_cast<long>(coords.size()) != dimension) {
    throw std::runtime_error(fmt::format("TSPLIB: DIMENSION {} but {} coordinates",
                                         dimension, coords.size()));
  }
  const TaskKind task = type == "CVRP" ? TaskKind::kCvrp : TaskKind::kTsp;
  if (type != "TSP" && type != "CVRP") {
    throw std::runtime_error("TSPLIB: unsupported TYPE " + type);
  }
  std::size_t depot_pos = 0;
  if (task == TaskKind::kCvrp && !depots.empty()) {
    auto it = std::find_if(coords.begin(), coords.end(),
                           [&](const auto& c) { return c.first == depots.front(); });
    if (it == coords.end()) throw std::runtime_error("TSPLIB: depot id has no coordinates");
    depot_pos = static_cast<std::size_t>(it - coords.begin());
  }
  std::vector<Point> pts;
  std::vector<double> dem;
  auto push = [&](std::size_t i) {
    pts.push_back(coords[i].second);
    if (task == TaskKind::kCvrp) {
      auto d = demands.find(coords[i].first);
      if (d == demands.end()) {
        throw std::runtime_error(fmt::format("TSPLIB: node {} has no demand", coords[i].first));
      }
      dem.push_back(d->second);
    }
  };
  push(depot_pos);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i != depot_pos) push(i);
  }
  return RoutingInstance::make(task, std::move(pts), std::move(dem), capacity,
                               std::move(name));
}

RoutingInstance read_tsplib_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open routing instance '" + path + "'");
  auto slash = path.find_last_of('/');
  return read_tsplib(in, path.substr(slash == std::string::npos ? 0 : slash + 1));
}

void write_tsplib(std::ostream& out, const RoutingInstance& inst) {
  const bool cvrp = inst.task == TaskKind::kCvrp;
  out << "NAME : " << (inst.name.empty() ? "instance" : inst.name) << '\n';
  out << "TYPE : " << (cvrp ? "CVRP" : "TSP") << '\n';
  out << "DIMENSION : " << inst.size() << '\n';
  out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
  if (cvrp) out << "CAPACITY : " << fmt::format("{}", inst.capacity) << '\n';
  out << "NODE_COORD_SECTION\n";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    out << fmt::format("{} {} {}\n", i + 1, inst.coords[i].x, inst.coords[i].y);
  }
  if (cvrp) {
    out << "DEMAND_SECTION\n";
    for (std::size_t i = 0; i < inst.size(); ++i) {
      out << fmt::format("{} {}\n", i + 1, inst.demands[i]);
    }
    out << "DEPOT_SECTION\n1\n-1\n";
  }
  out << "EOF\n";
}

}  // namespace heurevo::routing
