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

#ifndef HEUREVO_DSL_SCHEMA_HPP_
#define HEUREVO_DSL_SCHEMA_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heurevo/engine/state.hpp"

namespace heurevo::dsl {

struct FeatureSpec {
  std::string name;
  std::string description;
};

// Named per-candidate features of one task family. The index of a feature
// is its slot in every FeatureVector produced for that task.
class FeatureSchema {
 public:
  FeatureSchema(TaskKind task, std::vector<FeatureSpec> features,
                std::vector<std::pair<std::string, std::string>> aliases = {});

  TaskKind task() const { return task_; }
  std::size_t size() const { return features_.size(); }
  const std::vector<FeatureSpec>& features() const { return features_; }
  const std::string& name(std::size_t index) const {
    return features_.at(index).name;
  }

  // Resolves a declared name or alias to its index.
  std::optional<std::size_t> index_of(std::string_view name) const;
  // Index of a declared name; throws std::out_of_range otherwise.
  std::size_t require(std::string_view name) const;

 private:
  TaskKind task_;
  std::vector<FeatureSpec> features_;
  std::vector<std::pair<std::string, std::string>> aliases_;
};

}  // namespace heurevo::dsl

#endif  // HEUREVO_DSL_SCHEMA_HPP_
