// Copyright 2026 The ulearn Authors
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

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  ulearn::acceptance::Options opt;
  opt.jobs = std::max(1U, std::thread::hardware_concurrency());
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  opt.on_result = [](const ulearn::acceptance::CriterionResult& r) {
    std::printf("%s\n", ulearn::acceptance::format_line(r).c_str());
    std::fflush(stdout);
  };
  bool ok = true;
  for (const auto& r : ulearn::acceptance::run_all(opt)) ok = ok && r.passed;
  return ok ? 0 : 1;
}
