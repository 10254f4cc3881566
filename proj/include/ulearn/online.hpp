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

#ifndef ULEARN_ONLINE_HPP_
#define ULEARN_ONLINE_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "ulearn/core.hpp"
#include "ulearn/trees.hpp"

namespace ulearn {

// Mistake-driven learner built on the game strategy: the prefix holds the
// examples on which it erred, and on a fresh x it predicts the label the
// strategy would not answer, i.e. 1 - littlestone_move(prefix, x).
// A value type; copies are independent.
class OnlineLearner {
 public:
  explicit OnlineLearner(std::shared_ptr<const GameSolver> solver);

  Label predict(Point x) const;
  // Records (x, y); returns true on a mistake. Throws RealizabilityError if
  // no hypothesis is consistent with the full history.
  bool observe(Point x, Label y);

  std::size_t round() const { return prefix_.size() + 1; }
  std::size_t mistakes() const { return prefix_.size(); }
  const std::vector<Constraint>& prefix() const { return prefix_; }
  // Game value (Littlestone dimension) at the current prefix.
  int value() const { return solver_->littlestone(strategy_members_); }
  const GameSolver& solver() const { return *solver_; }

  // Current predictions on every point.
  std::vector<Label> labels() const;

  // Equality of the learner state (the history seen so far is not part of it).
  friend bool operator==(const OnlineLearner& a, const OnlineLearner& b) {
    return a.solver_ == b.solver_ && a.prefix_ == b.prefix_;
  }

 private:
  std::shared_ptr<const GameSolver> solver_;
  std::vector<Constraint> prefix_;
  BitVector strategy_members_;  // class restricted to the prefix
  BitVector version_space_;     // class restricted to everything observed
};

Label online_predict(const OnlineLearner& state, Point x);
OnlineLearner online_update(OnlineLearner state, Point x, Label y);

// Replays a stored Littlestone tree: shows the current node's point and
// answers the opposite of the learner's prediction.
class TreeAdversary {
 public:
  explicit TreeAdversary(LittlestoneTree tree);

  bool exhausted() const { return static_cast<int>(path_.size()) >= tree_.depth; }
  // Point the adversary will present next; throws AdversaryExhausted.
  Point current_point() const;
  const std::vector<Label>& path() const { return path_; }

  // Emits (x, 1 - prediction) and descends.
  Constraint next(Label learner_prediction);

 private:
  LittlestoneTree tree_;
  std::vector<Label> path_;
};

Constraint adversary_next(TreeAdversary& adv, Label learner_prediction);

struct DuelRound {
  std::size_t round;
  Point x;
  Label prediction;
  Label label;
  bool mistake;
};

// Plays the learner against the adversary until the tree is exhausted.
std::vector<DuelRound> duel(OnlineLearner learner, TreeAdversary adversary);

}  // namespace ulearn

#endif  // ULEARN_ONLINE_HPP_
