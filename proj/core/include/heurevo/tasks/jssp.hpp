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

#ifndef HEUREVO_TASKS_JSSP_HPP_
#define HEUREVO_TASKS_JSSP_HPP_

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "heurevo/dsl/program.hpp"
#include "heurevo/dsl/schema.hpp"
#include "heurevo/engine/environment.hpp"

namespace heurevo {
class Rng;
}

namespace heurevo::jssp {

struct Operation {
  int machine = 0;
  int duration = 1;
};

struct JsspInstance {
  std::string name;
  int num_jobs = 0;
  int num_machines = 0;
  // routes[j] is job j's machine order with durations.
  std::vector<std::vector<Operation>> routes;

  int total_operations() const;
  // Throws std::invalid_argument on bad machine ids or durations < 1.
  void validate() const;
};

// How a dispatched operation is placed on its machine.
enum class DispatchMode {
  // Earliest idle interval on the machine, at or after the job is ready,
  // that fits the operation.
  kInsertion,
  // After the machine's last scheduled operation.
  kAppend,
};

std::string_view to_string(DispatchMode mode);
DispatchMode parse_dispatch_mode(std::string_view name);

const dsl::FeatureSchema& feature_schema();

// Feature slots, in schema order.
enum Feature : std::size_t {
  kProcTime,
  kRemainingWork,
  kMachineQueueLen,
  kMachineTotalWork,
  kMachineReadyTime,
  kEarliestStart,
  kEarliestFinish,
  kJobReadyTime,
  kLowerBoundAfter,
  kJobProgress,
  kOpIndex,
  kJobId,
  kFlowDue,
  kMakespanSoFar,
  kRemainingOps,
  kNumFeatures,
};

struct ScheduledOp {
  int job;
  int op_index;
  int machine;
  std::int64_t start;
  std::int64_t end;
};

// Dispatching simulation. Candidates are the next unscheduled operation of
// every unfinished job; the action id is the job index.
class JsspEnvironment final : public Environment {
 public:
  JsspEnvironment(std::shared_ptr<const JsspInstance> instance,
                  DispatchMode mode = DispatchMode::kInsertion);

  TaskKind task() const override { return TaskKind::kJssp; }
  bool terminal() const override;
  int step_count() const override { return scheduled_; }
  EpisodeState observe() const override;
  void step(ActionId action) override;
  double objective() const override { return static_cast<double>(makespan_); }
  double recompute_objective() const override;
  std::size_t horizon_hint() const override;

  // Where `job`'s next operation would start and the start of the idle
  // interval it lands in.
  struct Slot {
    std::int64_t machine_ready;
    std::int64_t start;
  };
  Slot slot_for(int job) const;

  // Machine-based bound after dispatching `job`'s next operation:
  // max over machines of (completion time + unscheduled work on it).
  double lower_bound_after(int job) const;

  const JsspInstance& instance() const { return *instance_; }
  const std::vector<ScheduledOp>& schedule() const { return history_; }
  // Per machine, scheduled operations sorted by start time.
  const std::vector<std::vector<ScheduledOp>>& machine_sequences() const {
    return machines_;
  }

 private:
  std::shared_ptr<const JsspInstance> instance_;
  DispatchMode mode_;
  std::vector<int> next_op_;
  std::vector<std::int64_t> job_ready_;
  std::vector<std::int64_t> job_remaining_;
  std::vector<std::vector<ScheduledOp>> machines_;
  std::vector<std::int64_t> machine_end_;
  std::vector<std::int64_t> machine_remaining_;
  std::vector<ScheduledOp> history_;
  std::int64_t makespan_ = 0;
  int scheduled_ = 0;
};

// Classical dispatching rules as DSL programs (with explicit unit weights
// so calibration has constants to work on).
//   spt:      shortest processing time
//   mwkr:     most work remaining
//   fdd_mwkr: smallest flow-due-date / remaining work
//   mor:      most operations remaining
std::vector<std::string> rule_names();
// Throws std::invalid_argument ("UnknownRule").
dsl::HeuristicProgram baseline_rule(std::string_view name);

// Durations uniform in [1, 99], machine orders uniform permutations.
JsspInstance generate_random(int jobs, int machines, Rng& rng);

// Taillard's portable generator (linear congruential, 16807 mod 2^31-1).
JsspInstance generate_taillard(std::int64_t time_seed,
                               std::int64_t machine_seed, int jobs,
                               int machines, std::string name = {});

struct TaillardSeed {
  int index;  // ta01 = 1
  int jobs;
  int machines;
  std::int64_t time_seed;
  std::int64_t machine_seed;
};
// Known (instance, seed) pairs; ta10 is absent.
const std::vector<TaillardSeed>& taillard_seeds();
std::optional<JsspInstance> taillard_instance(int index);

// Text format: "J M" (extra numbers on the line ignored, header lines with
// letters skipped), J rows of durations, J rows of machines. Machines may
// be 0- or 1-indexed.
JsspInstance read_taillard(std::istream& in, std::string name = {});
JsspInstance read_taillard_file(const std::string& path);
// Writes 1-indexed machines.
void write_taillard(std::ostream& out, const JsspInstance& instance);

}  // namespace heurevo::jssp

#endif  // HEUREVO_TASKS_JSSP_HPP_
