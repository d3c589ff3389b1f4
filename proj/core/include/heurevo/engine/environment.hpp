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

#ifndef HEUREVO_ENGINE_ENVIRONMENT_HPP_
#define HEUREVO_ENGINE_ENVIRONMENT_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

#include "heurevo/engine/state.hpp"

namespace heurevo {

class InfeasibleAction : public std::invalid_argument {
 public:
  explicit InfeasibleAction(const std::string& what)
      : std::invalid_argument(what) {}
};

// One episode of a sequential decision task. Environments are per-episode
// values; instances they read from are shared immutably.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual TaskKind task() const = 0;
  virtual bool terminal() const = 0;
  virtual int step_count() const = 0;
  // Non-terminal states carry at least one candidate.
  virtual EpisodeState observe() const = 0;
  // Throws InfeasibleAction if `action` is not a current candidate.
  virtual void step(ActionId action) = 0;
  // Incrementally tracked objective, minimization form.
  virtual double objective() const = 0;
  // Objective recomputed from the final solution representation.
  virtual double recompute_objective() const = 0;
  // Expected number of decisions, used to spread state samples.
  virtual std::size_t horizon_hint() const = 0;
};

}  // namespace heurevo

#endif  // HEUREVO_ENGINE_ENVIRONMENT_HPP_
