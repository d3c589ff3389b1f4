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

#ifndef HEUREVO_TEACHER_CHANNEL_HPP_
#define HEUREVO_TEACHER_CHANNEL_HPP_

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include <sys/types.h>

namespace heurevo::teacher {

// Bidirectional newline-framed text channel.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  // Appends '\n'. Throws ProtocolError if the peer is gone.
  virtual void write_line(std::string_view line) = 0;
  // Next line without its terminator. Throws TeacherTimeout, or
  // ProtocolError when the peer closes the stream.
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
};

// Channel over raw file descriptors (pipe pair or one socket). Owns the
// descriptors and, if pid > 0, the child process, which is reaped on
// destruction.
class FdChannel final : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd, pid_t child = -1);
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void write_line(std::string_view line) override;
  std::string read_line(std::chrono::milliseconds timeout) override;

 private:
  int read_fd_;
  int write_fd_;
  pid_t child_;
  std::string buffer_;
};

// Runs `command` through /bin/sh with its stdin/stdout as the channel.
std::unique_ptr<LineChannel> spawn_process(const std::string& command);
std::unique_ptr<LineChannel> connect_tcp(const std::string& host, int port);

}  // namespace heurevo::teacher

#endif  // HEUREVO_TEACHER_CHANNEL_HPP_
