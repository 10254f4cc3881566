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

#ifndef ULEARN_LEARNERS_HPP_
#define ULEARN_LEARNERS_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ulearn/core.hpp"
#include "ulearn/generators.hpp"
#include "ulearn/patterns.hpp"
#include "ulearn/trees.hpp"

namespace ulearn {

using Sample = std::vector<LabeledPoint>;

// Total deterministic function domain -> {0,1}. Cheap to copy.
class Classifier {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual Label At(Point x) const = 0;
  };

  Classifier(std::size_t domain_size, std::shared_ptr<const Impl> impl);

  static Classifier Constant(std::size_t domain_size, Label y);
  static Classifier FromLabels(std::vector<Label> labels);
  static Classifier FromBits(const BitVector& bits);
  // Label 1 iff strictly more than half the voters say 1.
  static Classifier Majority(std::vector<Classifier> voters);

  Label operator()(Point x) const;
  std::size_t domain_size() const { return domain_size_; }
  std::vector<Label> labels() const;

 private:
  std::size_t domain_size_;
  std::shared_ptr<const Impl> impl_;
};

// Diagnostics of the two-stage learners.
struct LearnerTrace {
  std::optional<std::size_t> t_hat;
  // (failure count, batch count) for t = 1, 2, ... as evaluated.
  std::vector<std::pair<std::size_t, std::size_t>> failures;
  std::size_t voters = 0;
  std::size_t excluded = 0;
  bool erm_fallback = false;
};

// Index arithmetic shared by the learners and their tests.
namespace split {
inline std::size_t exp_max_t(std::size_t n) { return n / 2; }
inline std::size_t exp_batches(std::size_t n, std::size_t t) { return n / (2 * t); }
// First 0-based index of the evaluation half (s > n/2).
inline std::size_t exp_eval_begin(std::size_t n) { return n / 2; }

inline std::size_t lin_max_t(std::size_t n) { return n / 4; }
inline std::size_t lin_batches(std::size_t n, std::size_t t) { return n / (4 * t); }
// Window starts s with n/4 <= s <= n/2 - tau; the window is 0-based
// [s, s + tau).
inline std::size_t lin_window_first(std::size_t n) { return (n + 3) / 4; }
inline long lin_window_last(std::size_t n, std::size_t tau) {
  return static_cast<long>(n / 2) - static_cast<long>(tau);
}
// The labeled part of the one-inclusion step: 0-based [ceil(n/2) - 1, n).
inline std::size_t lin_tail_begin(std::size_t n) { return (n + 1) / 2 - 1; }
// ê_t < 1/4 exactly.
inline bool below_quarter(std::size_t failures, std::size_t batches) { return 4 * failures < batches; }
}  // namespace split

Classifier exp_learner(std::shared_ptr<const GameSolver> solver, std::span<const LabeledPoint> sample,
                       LearnerTrace* trace = nullptr);
Classifier lin_learner(std::shared_ptr<const GameSolver> solver, std::span<const LabeledPoint> sample,
                       LearnerTrace* trace = nullptr);

// The online learner run once over the sample.
Classifier online_as_batch(std::shared_ptr<const GameSolver> solver, std::span<const LabeledPoint> sample);

// First consistent hypothesis in canonical order; RealizabilityError if none.
Classifier erm_learner(const ConceptClass& cls, std::span<const LabeledPoint> sample);
Classifier erm_learner(const Generator& gen, std::span<const LabeledPoint> sample);

// ERM that, on an all-zero sample, picks the first listed block with at
// most half its points sampled and outputs the indicator of the first
// 2^(i-1) unsampled points there. Falls back to erm_learner otherwise.
Classifier adversarial_erm(const ErmFailureClass& cls, std::span<const LabeledPoint> sample);

}  // namespace ulearn

#endif  // ULEARN_LEARNERS_HPP_
