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

#ifndef HEUREVO_GENBACKEND_MOCK_HPP_
#define HEUREVO_GENBACKEND_MOCK_HPP_

#include <cstdint>

#include "heurevo/dsl/expr.hpp"
#include "heurevo/dsl/schema.hpp"
#include "heurevo/genbackend/backend.hpp"
#include "heurevo/util/random.hpp"

namespace heurevo::genbackend {

// Random expression of depth <= max_depth that references at least one
// feature. Literals are rounded to two decimals.
dsl::ExprPtr random_expression(const dsl::FeatureSchema& schema, int max_depth, Rng& rng);

// Mode-faithful AST edit of the request's parents:
//   calibration  one literal scaled by uniform(0.5, 2.0), shape unchanged;
//   structural   one subtree replaced by a random depth <= 3 expression;
//   fusion       a subtree of parent 2 grafted into parent 1 at a node of
//                the same kind (comparison vs. numeric).
// The output always parses under the task schema.
GenerationResponse mock_generate(const GenerationRequest& request, Rng& rng);

struct MockOptions {
  std::uint64_t seed = 0;
  // Share of generation calls answered with unusable text, to exercise
  // the retry path.
  double fault_rate = 0.0;
};

// Offline backend. Each reply is a pure function of (seed, request), so
// runs are reproducible whatever the call order.
class MockBackend : public Backend {
 public:
  explicit MockBackend(MockOptions options = {}) : options_(options) {}

 protected:
  std::string do_generate(const GenerationRequest& request) override;
  std::string do_analyze(const AnalyzerRequest& request) override;

 private:
  MockOptions options_;
};

}  // namespace heurevo::genbackend

#endif  // HEUREVO_GENBACKEND_MOCK_HPP_
