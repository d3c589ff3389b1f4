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

#ifndef HEUREVO_TEACHER_EXTERNAL_HPP_
#define HEUREVO_TEACHER_EXTERNAL_HPP_

#include <atomic>
#include <chrono>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include "heurevo/teacher/teacher.hpp"

namespace heurevo::teacher {

enum class Transport { kProcess, kTcp };
std::string_view to_string(Transport t);
Transport parse_transport(std::string_view name);

struct ExternalTeacherConfig {
  std::string name = "external";
  Transport transport = Transport::kProcess;
  std::string command;  // kProcess
  std::string host = "127.0.0.1";
  int port = 0;  // kTcp
  std::chrono::milliseconds timeout{10000};
  // Independent connections; each carries one request at a time.
  std::size_t connections = 1;
  Capability capability = Capability::kScores;
};

// Teacher behind the line-delimited JSON protocol. Connections are opened
// lazily; a connection that times out or misbehaves is discarded and the
// next query on that slot reconnects.
TeacherPtr external_teacher(ExternalTeacherConfig config);

// Answers requests read from `in` until end of stream, one reply per line.
// Returns the number of requests served. Malformed requests throw
// ProtocolError.
std::size_t serve_stream(const Teacher& teacher, std::istream& in, std::ostream& out);

// Listens on host:port (port 0 picks a free one, reported through
// `on_listening`) and serves each connection on its own thread until
// `stop` becomes true.
void serve_tcp(const Teacher& teacher, const std::string& host, int port,
               const std::atomic<bool>& stop, const std::function<void(int)>& on_listening = {});

}  // namespace heurevo::teacher

#endif  // HEUREVO_TEACHER_EXTERNAL_HPP_
