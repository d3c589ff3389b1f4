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

#include "heurevo/tasks/jssp.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "heurevo/util/random.hpp"

namespace heurevo::jssp {

int JsspInstance::total_operations() const {
  int total = 0;
  for (const auto& r : routes) total += static_cast<int>(r.size());
  return total;
}

void JsspInstance::validate() const {
  if (num_jobs < 1 || num_machines < 1) {
    throw std::invalid_argument("JSSP instance needs at least one job and one machine");
  }
  if (static_cast<int>(routes.size()) != num_jobs) {
    throw std::invalid_argument("JSSP instance: route count != num_jobs");
  }
  for (int j = 0; j < num_jobs; ++j) {
    if (routes[j].empty()) {
      throw std::invalid_argument(fmt::format("JSSP job {} has no operations", j));
    }
    for (const auto& op : routes[j]) {
      if (op.machine < 0 || op.machine >= num_machines) {
        throw std::invalid_argument(
            fmt::format("JSSP job {}: machine {} out of range", j, op.machine));
      }
      if (op.duration < 1) {
        throw std::invalid_argument(
            fmt::format("JSSP job {}: duration {} < 1", j, op.duration));
      }
    }
  }
}

std::string_view to_string(DispatchMode mode) {
  return mode == DispatchMode::kInsertion ? "insertion" : "append";
}

DispatchMode parse_dispatch_mode(std::string_view name) {
  if (name == "insertion") return DispatchMode::kInsertion;
  if (name == "append") return DispatchMode::kAppend;
  throw std::invalid_argument("unknown dispatch mode '" + std::string(name) + "'");
}

const dsl::FeatureSchema& feature_schema() {
  static const dsl::FeatureSchema schema(
      TaskKind::kJssp,
      {
          {"proc_time", "processing time of the operation"},
          {"remaining_work", "job work left, including this operation"},
          {"machine_queue_len", "dispatchable operations waiting for this machine"},
          {"machine_total_work", "unscheduled work on this machine, including this operation"},
          {"machine_ready_time", "start of the machine idle interval the operation would occupy"},
          {"earliest_start", "earliest start time: max(job_ready_time, machine_ready_time)"},
          {"earliest_finish", "earliest_start + proc_time"},
          {"job_ready_time", "completion time of the job's previous operation"},
          {"lower_bound_after", "max over machines of completion time plus unscheduled work, if dispatched"},
          {"job_progress", "fraction of the job's operations already scheduled, in [0, 1]"},
          {"op_index", "position of the operation in its job route (0-based)"},
          {"job_id", "job index"},
          {"flow_due", "sum of the job's durations through this operation"},
          {"makespan_so_far", "largest completion time in the partial schedule"},
          {"remaining_ops", "operations left in the job, including this one"},
      },
      {{"progress", "job_progress"},
       {"processing_time", "proc_time"},
       {"flow_due_date", "flow_due"}});
  return schema;
}

JsspEnvironment::JsspEnvironment(std::shared_ptr<const JsspInstance> instance,
                                 DispatchMode mode)
    : instance_(std::move(instance)), mode_(mode) {
  instance_->validate();
  const int J = instance_->num_jobs;
  const int M = instance_->num_machines;
  next_op_.assign(J, 0);
  job_ready_.assign(J, 0);
  job_remaining_.assign(J, 0);
  machines_.assign(M, {});
  machine_end_.assign(M, 0);
  machine_remaining_.assign(M, 0);
  for (int j = 0; j < J; ++j) {
    for (const auto& op : instance_->routes[j]) {
      job_remaining_[j] += op.duration;
      machine_remaining_[op.machine] += op.duration;
    }
  }
  history_.reserve(instance_->total_operations());
}

bool JsspEnvironment::terminal() const {
  return scheduled_ == instance_->total_operations();
}

std::size_t JsspEnvironment::horizon_hint() const {
  return static_cast<std::size_t>(instance_->total_operations());
}

JsspEnvironment::Slot JsspEnvironment::slot_for(int job) const {
  const auto& op = instance_->routes[job][next_op_[job]];
  const std::int64_t ready = job_ready_[job];
  const auto& seq = machines_[op.machine];
  if (mode_ == DispatchMode::kAppend) {
    const std::int64_t m_ready = machine_end_[op.machine];
    return {m_ready, std::max(ready, m_ready)};
  }
  std::int64_t gap_start = 0;
  for (const auto& s : seq) {
    const std::int64_t start = std::max(ready, gap_start);
    if (start + op.duration <= s.start) return {gap_start, start};
    gap_start = s.end;
  }
  return {gap_start, std::max(ready, gap_start)};
}

double JsspEnvironment::lower_bound_after(int job) const {
  const auto& op = instance_->routes[job][next_op_[job]];
  const Slot slot = slot_for(job);
  double bound = 0.0;
  for (int m = 0; m < instance_->num_machines; ++m) {
    double v;
    if (m == op.machine) {
      const std::int64_t end =
          std::max(machine_end_[m], slot.start + op.duration);
      v = static_cast<double>(end + machine_remaining_[m] - op.duration);
    } else {
      v = static_cast<double>(machine_end_[m] + machine_remaining_[m]);
    }
    bound = std::max(bound, v);
  }
  return bound;
}

EpisodeState JsspEnvironment::observe() const {
  EpisodeState state;
  state.task = TaskKind::kJssp;
  state.step = scheduled_;
  const int J = instance_->num_jobs;
  const int M = instance_->num_machines;

  std::vector<int> queue(M, 0);
  for (int j = 0; j < J; ++j) {
    if (next_op_[j] < static_cast<int>(instance_->routes[j].size())) {
      ++queue[instance_->routes[j][next_op_[j]].machine];
    }
  }
  // Two largest machine bounds so each candidate's bound is O(1).
  double best = -1.0, second = -1.0;
  int best_m = -1;
  for (int m = 0; m < M; ++m) {
    const double v = static_cast<double>(machine_end_[m] + machine_remaining_[m]);
    if (v > best) {
      second = best;
      best = v;
      best_m = m;
    } else if (v > second) {
      second = v;
    }
  }

  for (int j = 0; j < J; ++j) {
    const auto& route = instance_->routes[j];
    const int o = next_op_[j];
    if (o >= static_cast<int>(route.size())) continue;
    const auto& op = route[o];
    const Slot slot = slot_for(j);
    const std::int64_t own_end =
        std::max(machine_end_[op.machine], slot.start + op.duration);
    const double own =
        static_cast<double>(own_end + machine_remaining_[op.machine] - op.duration);
    const double others = op.machine == best_m ? second : best;
    std::int64_t flow_due = 0;
    for (int k = 0; k <= o; ++k) flow_due += route[k].duration;

    FeatureVector f(kNumFeatures);
    f[kProcTime] = op.duration;
    f[kRemainingWork] = static_cast<double>(job_remaining_[j]);
    f[kMachineQueueLen] = queue[op.machine];
    f[kMachineTotalWork] = static_cast<double>(machine_remaining_[op.machine]);
    f[kMachineReadyTime] = static_cast<double>(slot.machine_ready);
    f[kEarliestStart] = static_cast<double>(slot.start);
    f[kEarliestFinish] = static_cast<double>(slot.start + op.duration);
    f[kJobReadyTime] = static_cast<double>(job_ready_[j]);
    f[kLowerBoundAfter] = std::max({own, others, 0.0});
    f[kJobProgress] = static_cast<double>(o) / static_cast<double>(route.size());
    f[kOpIndex] = o;
    f[kJobId] = j;
    f[kFlowDue] = static_cast<double>(flow_due);
    f[kMakespanSoFar] = static_cast<double>(makespan_);
    f[kRemainingOps] = static_cast<double>(route.size()) - o;
    state.candidates.push_back({ActionId{j}, std::move(f)});
  }
  state.context = {
      {"makespan_so_far", static_cast<double>(makespan_)},
      {"scheduled_ops", static_cast<double>(scheduled_)},
      {"total_ops", static_cast<double>(instance_->total_operations())},
      {"num_jobs", static_cast<double>(J)},
      {"num_machines", static_cast<double>(M)},
  };
  return state;
}

void JsspEnvironment::step(ActionId action) {
  const auto j = to_int(action);
  if (j < 0 || j >= instance_->num_jobs ||
      next_op_[j] >= static_cast<int>(instance_->routes[j].size())) {
    throw InfeasibleAction(fmt::format("job {} has no dispatchable operation", j));
  }
  const int job = static_cast<int>(j);
  const auto& op = instance_->routes[job][next_op_[job]];
  const Slot slot = slot_for(job);
  const ScheduledOp placed{job, next_op_[job], op.machine, slot.start,
                           slot.start + op.duration};
  auto& seq = machines_[op.machine];
  auto pos = std::upper_bound(
      seq.begin(), seq.end(), placed.start,
      [](std::int64_t t, const ScheduledOp& s) { return t < s.start; });
  seq.insert(pos, placed);
  machine_end_[op.machine] = std::max(machine_end_[op.machine], placed.end);
  machine_remaining_[op.machine] -= op.duration;
  job_ready_[job] = placed.end;
  job_remaining_[job] -= op.duration;
  ++next_op_[job];
  makespan_ = std::max(makespan_, placed.end);
  history_.push_back(placed);
  ++scheduled_;
}

double JsspEnvironment::recompute_objective() const {
  std::int64_t ms = 0;
  for (const auto& s : history_) ms = std::max(ms, s.end);
  return static_cast<double>(ms);
}

std::vector<std::string> rule_names() { return {"spt", "mwkr", "fdd_mwkr", "mor"}; }

dsl::HeuristicProgram baseline_rule(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return c == '-' || c == '/' ? '_' : static_cast<char>(std::tolower(c));
  });
  std::string_view source;
  std::string description;
  if (key == "spt") {
    source = "-1 * proc_time";
    description = "Shortest processing time first.";
  } else if (key == "mwkr") {
    source = "1 * remaining_work";
    description = "Most work remaining first.";
  } else if (key == "fdd_mwkr") {
    source = "-1 * (flow_due / remaining_work)";
    description = "Smallest flow due date over remaining work first.";
  } else if (key == "mor") {
    source = "1 * remaining_ops";
    description = "Most operations remaining first.";
  } else {
    throw std::invalid_argument("UnknownRule: '" + std::string(name) + "'");
  }
  return dsl::HeuristicProgram::parse(source, feature_schema(),
                                      {description, {}, dsl::RevisionMode::kSeed});
}

JsspInstance generate_random(int jobs, int machines, Rng& rng) {
  if (jobs < 1 || machines < 1) {
    throw std::invalid_argument("generate_random: jobs and machines must be >= 1");
  }
  JsspInstance inst;
  inst.num_jobs = jobs;
  inst.num_machines = machines;
  inst.routes.resize(jobs);
  for (int j = 0; j < jobs; ++j) {
    std::vector<int> order(machines);
    for (int m = 0; m < machines; ++m) order[m] = m;
    for (int m = machines - 1; m > 0; --m) {
      const auto k = static_cast<int>(rng.below(static_cast<std::uint64_t>(m) + 1));
      std::swap(order[m], order[k]);
    }
    for (int m = 0; m < machines; ++m) {
      inst.routes[j].push_back({order[m], static_cast<int>(rng.uniform_int(1, 99))});
    }
  }
  return inst;
}

namespace {

// Taillard (1993) uniform generator; float arithmetic as in the original.
std::int64_t taillard_unif(std::int64_t& seed, std::int64_t low, std::int64_t high) {
  constexpr std::int64_t m = 2147483647, a = 16807, b = 127773, c = 2836;
  const std::int64_t k = seed / b;
  seed = a * (seed % b) - k * c;
  if (seed < 0) seed += m;
  const double value_0_1 = static_cast<float>(seed) / static_cast<float>(m);
  return low + static_cast<std::int64_t>(value_0_1 * static_cast<double>(high - low + 1));
}

}  // namespace

JsspInstance generate_taillard(std::int64_t time_seed, std::int64_t machine_seed,
                               int jobs, int machines, std::string name) {
  JsspInstance inst;
  inst.name = std::move(name);
  inst.num_jobs = jobs;
  inst.num_machines = machines;
  std::vector<std::vector<int>> d(jobs, std::vector<int>(machines));
  for (int i = 0; i < jobs; ++i) {
    for (int j = 0; j < machines; ++j) {
      d[i][j] = static_cast<int>(taillard_unif(time_seed, 1, 99));
    }
  }
  std::vector<std::vector<int>> mach(jobs, std::vector<int>(machines));
  for (int i = 0; i < jobs; ++i) {
    for (int j = 0; j < machines; ++j) mach[i][j] = j;
    for (int j = 0; j < machines; ++j) {
      const auto k = taillard_unif(machine_seed, j, machines - 1);
      std::swap(mach[i][j], mach[i][k]);
    }
  }
  inst.routes.resize(jobs);
  for (int i = 0; i < jobs; ++i) {
    for (int j = 0; j < machines; ++j) inst.routes[i].push_back({mach[i][j], d[i][j]});
  }
  return inst;
}

const std::vector<TaillardSeed>& taillard_seeds() {
  static const std::vector<TaillardSeed> seeds = {
      {1, 15, 15, 840612802, 398197754},   {2, 15, 15, 1314640371, 386720536},
      {3, 15, 15, 1227221349, 316176388},  {4, 15, 15, 342269428, 1806358582},
      {5, 15, 15, 1603221416, 1501949241}, {6, 15, 15, 1357584978, 1734077082},
      {7, 15, 15, 44531661, 1374316395},   {8, 15, 15, 302545136, 2092186050},
      {9, 15, 15, 1153780144, 1393392374},
      {11, 20, 15, 533484900, 317419073},  {12, 20, 15, 1894307698, 1474268163},
      {13, 20, 15, 874340513, 509669280},  {14, 20, 15, 1124986343, 1209573668},
      {15, 20, 15, 1463788335, 529048107}, {16, 20, 15, 1056908795, 25321885},
      {17, 20, 15, 195672285, 1717580117}, {18, 20, 15, 961965583, 1353003786},
      {19, 20, 15, 1610169733, 1734469503}, {20, 20, 15, 532794656, 998486810},
      {21, 20, 20, 1035939303, 773961798}, {22, 20, 20, 5997802, 1872541150},
      {23, 20, 20, 1357503601, 722225039}, {24, 20, 20, 806159563, 1166962073},
      {25, 20, 20, 1902815253, 1879990068}, {26, 20, 20, 1503184031, 1850351876},
      {27, 20, 20, 1032645967, 99711329},  {28, 20, 20, 229894219, 1158117804},
      {29, 20, 20, 823349822, 108033225},  {30, 20, 20, 1297900341, 489486403},
  };
  return seeds;
}

std::optional<JsspInstance> taillard_instance(int index) {
  for (const auto& s : taillard_seeds()) {
    if (s.index == index) {
      return generate_taillard(s.time_seed, s.machine_seed, s.jobs, s.machines,
                               fmt::format("ta{:02d}", index));
    }
  }
  return std::nullopt;
}

namespace {

bool has_alpha(const std::string& line) {
  return std::any_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isalpha(c) != 0; });
}

}  // namespace

JsspInstance read_taillard(std::istream& in, std::string name) {
  std::vector<long long> header;
  std::vector<long long> body;
  std::string line;
  while (std::getline(in, line)) {
    if (has_alpha(line)) continue;
    std::istringstream ls(line);
    long long v;
    std::vector<long long> nums;
    while (ls >> v) nums.push_back(v);
    if (!ls.eof()) {
      throw std::runtime_error("Taillard reader: malformed line '" + line + "'");
    }
    if (nums.empty()) continue;
    if (header.empty()) {
      header = std::move(nums);
    } else {
      body.insert(body.end(), nums.begin(), nums.end());
    }
  }
  if (header.size() < 2) {
    throw std::runtime_error("Taillard reader: missing 'J M' header");
  }
  const long long J = header[0];
  const long long M = header[1];
  if (J < 1 || M < 1) throw std::runtime_error("Taillard reader: bad dimensions");
  if (static_cast<long long>(body.size()) != 2 * J * M) {
    throw std::runtime_error(fmt::format(
        "Taillard reader: expected {} values after header, found {}", 2 * J * M,
        body.size()));
  }
  const bool zero_based = std::any_of(body.begin() + J * M, body.end(),
                                      [](long long m) { return m == 0; });
  JsspInstance inst;
  inst.name = std::move(name);
  inst.num_jobs = static_cast<int>(J);
  inst.num_machines = static_cast<int>(M);
  inst.routes.resize(static_cast<std::size_t>(J));
  for (long long j = 0; j < J; ++j) {
    for (long long k = 0; k < M; ++k) {
      const long long d = body[j * M + k];
      const long long m = body[J * M + j * M + k] - (zero_based ? 0 : 1);
      inst.routes[j].push_back({static_cast<int>(m), static_cast<int>(d)});
    }
  }
  inst.validate();
  return inst;
}

JsspInstance read_taillard_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open JSSP instance '" + path + "'");
  auto slash = path.find_last_of('/');
  std::string stem = path.substr(slash == std::string::npos ? 0 : slash + 1);
  return read_taillard(in, stem);
}

void write_taillard(std::ostream& out, const JsspInstance& inst) {
  out << inst.num_jobs << ' ' << inst.num_machines << '\n';
  for (const auto& route : inst.routes) {
    for (std::size_t k = 0; k < route.size(); ++k) {
      out << (k ? " " : "") << route[k].duration;
    }
    out << '\n';
  }
  for (const auto& route : inst.routes) {
    for (std::size_t k = 0; k < route.size(); ++k) {
      out << (k ? " " : "") << route[k].machine + 1;
    }
    out << '\n';
  }
}

}  // namespace heurevo::jssp
