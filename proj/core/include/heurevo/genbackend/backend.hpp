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

#ifndef HEUREVO_GENBACKEND_BACKEND_HPP_
#define HEUREVO_GENBACKEND_BACKEND_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

#include "heurevo/genbackend/request.hpp"

namespace heurevo::genbackend {

// Source of raw model text. Calls are counted so budgets can be audited.
class Backend {
 public:
  virtual ~Backend() = default;

  std::string generate(const GenerationRequest& request) {
    ++generation_calls_;
    return do_generate(request);
  }
  std::string analyze(const AnalyzerRequest& request) {
    ++analyzer_calls_;
    return do_analyze(request);
  }

  std::uint64_t generation_calls() const { return generation_calls_; }
  std::uint64_t analyzer_calls() const { return analyzer_calls_; }
  void reset_counters(std::uint64_t generation = 0, std::uint64_t analyzer = 0) {
    generation_calls_ = generation;
    analyzer_calls_ = analyzer;
  }

 protected:
  virtual std::string do_generate(const GenerationRequest& request) = 0;
  virtual std::string do_analyze(const AnalyzerRequest& request) = 0;

 private:
  std::atomic<std::uint64_t> generation_calls_{0};
  std::atomic<std::uint64_t> analyzer_calls_{0};
};

using BackendPtr = std::shared_ptr<Backend>;

// One analyzer invocation. Extraction failures and BackendUnavailable
// degrade to empty briefs.
BriefSet analyzer_call(Backend& backend, const AnalyzerRequest& request);

}  // namespace heurevo::genbackend

#endif  // HEUREVO_GENBACKEND_BACKEND_HPP_
