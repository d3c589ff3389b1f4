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

// Serves a scripted teacher over the external-teacher protocol, on stdio or
// a TCP port. Useful as a conformance reference for real teacher servers.
#include <atomic>
#include <csignal>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "heurevo/engine/state.hpp"
#include "heurevo/teacher/external.hpp"
#include "heurevo/teacher/teacher.hpp"

namespace {
std::atomic<bool> g_stop{false};
}

int main(int argc, char** argv) {
  CLI::App app{"Scripted teacher over the line-delimited JSON protocol"};
  std::string task_name, teacher_name, transport = "stdio", host = "127.0.0.1";
  int port = 0;
  bool action_only = false;
  app.add_option("--task", task_name, "jssp | tsp | cvrp | maxcut")->required();
  app.add_option("--teacher", teacher_name, "scripted teacher name")->required();
  app.add_option("--transport", transport, "stdio | tcp")->check(CLI::IsMember({"stdio", "tcp"}));
  app.add_option("--host", host, "tcp listen address");
  app.add_option("--port", port, "tcp port (0 = any free port)");
  app.add_flag("--action-only", action_only, "answer with actions instead of scores");
  CLI11_PARSE(app, argc, argv);

  spdlog::set_default_logger(spdlog::stderr_color_st("teacher-stub"));
  try {
    auto teacher =
        heurevo::teacher::scripted_teacher(heurevo::parse_task(task_name), teacher_name);
    if (action_only) teacher = heurevo::teacher::action_only(teacher);
    std::ios::sync_with_stdio(false);
    if (transport == "stdio") {
      heurevo::teacher::serve_stream(*teacher, std::cin, std::cout);
      return 0;
    }
    std::signal(SIGINT, [](int) { g_stop = true; });
    std::signal(SIGTERM, [](int) { g_stop = true; });
    heurevo::teacher::serve_tcp(*teacher, host, port, g_stop, [](int p) {
      std::fprintf(stderr, "listening on port %d\n", p);
      std::fflush(stderr);
    });
    return 0;
  } catch (const heurevo::teacher::UnknownTeacher& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
