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

#include "heurevo/dsl/schema.hpp"

#include <stdexcept>

namespace heurevo::dsl {

FeatureSchema::FeatureSchema(
    TaskKind task, std::vector<FeatureSpec> features,
    std::vector<std::pair<std::string, std::string>> aliases)
    : task_(task), features_(std::move(features)), aliases_(std::move(aliases)) {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    for (std::size_t j = i + 1; j < features_.size(); ++j) {
      if (features_[i].name == features_[j].name) {
        throw std::invalid_argument("duplicate feature '" + features_[i].name +
                                    "'");
      }
    }
  }
  for (const auto& [alias, target] : aliases_) {
    if (!index_of(target)) {
      throw std::invalid_argument("alias '" + alias + "' targets unknown '" +
                                  target + "'");
    }
  }
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  for (const auto& [alias, target] : aliases_) {
    if (alias == name) {
      for (std::size_t i = 0; i < features_.size(); ++i) {
        if (features_[i].name == target) return i;
      }
    }
  }
  return std::nullopt;
}

std::size_t FeatureSchema::require(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  throw std::out_of_range("feature '" + std::string(name) + "' not in " +
                          std::string(to_string(task_)) + " schema");
}

}  // namespace heurevo::dsl
