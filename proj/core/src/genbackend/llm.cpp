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

#include "heurevo/genbackend/llm.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace heurevo::genbackend {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) {
    throw std::invalid_argument("backend url must look like http(s)://host[:port]/path: " + url);
  }
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

std::string redact(std::string text, const std::string& secret) {
  if (secret.empty()) return text;
  for (auto pos = text.find(secret); pos != std::string::npos; pos = text.find(secret, pos)) {
    text.replace(pos, secret.size(), "[redacted]");
  }
  return text;
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

LlmBackend::LlmBackend(LlmConfig config) : config_(std::move(config)) {
  split_url(config_.url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (config_.url.rfind("https://", 0) == 0) {
    throw std::invalid_argument("this build has no TLS support; use an http:// endpoint");
  }
#endif
  if (!config_.api_key_env.empty()) {
    if (const char* v = std::getenv(config_.api_key_env.c_str())) token_ = v;
  }
}

void LlmBackend::log_exchange(const std::string& body, int status, const std::string& reply,
                              const std::string& error) {
  if (config_.log_path.empty()) return;
  nlohmann::ordered_json line;
  line["url"] = config_.url;
  line["authorization"] = token_.empty() ? "none" : "Bearer [redacted]";
  line["request"] = redact(body, token_);
  line["status"] = status;
  line["response"] = redact(reply, token_);
  if (!error.empty()) line["error"] = redact(error, token_);
  std::lock_guard lock(log_mutex_);
  std::ofstream out(config_.log_path, std::ios::app);
  out << line.dump() << '\n';
}

std::string LlmBackend::complete(const std::vector<Message>& messages, double temperature) {
  const Endpoint ep = split_url(config_.url);
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  body["temperature"] = temperature;
  body["max_tokens"] = config_.max_tokens;
  const std::string payload = body.dump();

  httplib::Client client(ep.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  std::string last_error;
  auto delay = config_.backoff;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      spdlog::warn("backend request failed ({}); retry {} in {} ms", last_error, attempt,
                   delay.count());
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    auto res = client.Post(ep.path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      log_exchange(payload, 0, "", last_error);
      continue;
    }
    log_exchange(payload, res->status, res->body, "");
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      if (retryable(res->status)) continue;
      break;
    }
    try {
      const auto reply = nlohmann::json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("malformed reply: ") + e.what();
      break;
    }
  }
  throw BackendUnavailable(redact("backend request failed: " + last_error, token_));
}

std::string LlmBackend::do_generate(const GenerationRequest& request) {
  return complete(build_prompt(request), config_.temperature);
}

std::string LlmBackend::do_analyze(const AnalyzerRequest& request) {
  return complete(build_analyzer_prompt(request), config_.analyzer_temperature);
}

}  // namespace heurevo::genbackend
