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

#ifndef HEUREVO_GENBACKEND_LLM_HPP_
#define HEUREVO_GENBACKEND_LLM_HPP_

#include <chrono>
#include <mutex>
#include <string>
#include <vector>

#include "heurevo/genbackend/backend.hpp"
#include "heurevo/genbackend/prompt.hpp"

namespace heurevo::genbackend {

struct LlmConfig {
  // Full endpoint, e.g. "https://host/v1/chat/completions".
  std::string url;
  std::string model;
  // Name of the environment variable holding the bearer token.
  std::string api_key_env = "HEUREVO_LLM_API_KEY";
  double temperature = 0.8;
  double analyzer_temperature = 0.2;
  int max_tokens = 2048;
  std::chrono::milliseconds timeout{120000};
  int retries = 2;
  std::chrono::milliseconds backoff{1000};
  // JSON-lines exchange log; empty disables logging.
  std::string log_path;
};

// Chat-completions client: one POST per call, retried with exponential
// backoff on transport errors, 429 and 5xx.
class LlmBackend : public Backend {
 public:
  explicit LlmBackend(LlmConfig config);

  // Sends one message sequence and returns the first choice's content.
  // Throws BackendUnavailable.
  std::string complete(const std::vector<Message>& messages, double temperature);

  const LlmConfig& config() const { return config_; }

 protected:
  std::string do_generate(const GenerationRequest& request) override;
  std::string do_analyze(const AnalyzerRequest& request) override;

 private:
  void log_exchange(const std::string& body, int status, const std::string& reply,
                    const std::string& error);

  LlmConfig config_;
  std::string token_;
  std::mutex log_mutex_;
};

}  // namespace heurevo::genbackend

#endif  // HEUREVO_GENBACKEND_LLM_HPP_
