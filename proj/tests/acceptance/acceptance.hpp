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

#ifndef ULEARN_TESTS_ACCEPTANCE_HPP_
#define ULEARN_TESTS_ACCEPTANCE_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace ulearn::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

struct Options {
  std::size_t jobs = 1;
  // Criterion ids to run; empty runs all.
  std::vector<int> only;
  // Called as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_all(const Options& options);
// "PASS  [n] title: detail (x.x s)"
std::string format_line(const CriterionResult& r);

}  // namespace ulearn::acceptance

#endif  // ULEARN_TESTS_ACCEPTANCE_HPP_
