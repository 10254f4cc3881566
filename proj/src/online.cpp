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

#include "ulearn/online.hpp"

#include "ulearn/errors.hpp"

namespace ulearn {

OnlineLearner::OnlineLearner(std::shared_ptr<const GameSolver> solver) : solver_(std::move(solver)) {
  if (!solver_) throw UsageError("online learner needs a solver");
  strategy_members_ = solver_->concept_class().all();
  version_space_ = strategy_members_;
}

Label OnlineLearner::predict(Point x) const {
  solver_->concept_class().domain().check(x);
  return static_cast<Label>(1 - solver_->littlestone_move(strategy_members_, x));
}

bool OnlineLearner::observe(Point x, Label y) {
  const ConceptClass& cls = solver_->concept_class();
  cls.domain().check(x);
  BitVector next = cls.consistent(version_space_, x, y);
  if (next.none()) {
    throw RealizabilityError("example (" + cls.domain().name(x) + ", " + std::to_string(y) +
                             ") is inconsistent with every hypothesis given the history");
  }
  const bool mistake = predict(x) != y;
  version_space_ = std::move(next);
  if (mistake) {
    prefix_.push_back({x, y});
    strategy_members_ = cls.consistent(strategy_members_, x, y);
  }
  return mistake;
}

std::vector<Label> OnlineLearner::labels() const {
  std::vector<Label> out(solver_->concept_class().domain().size());
  for (Point x = 0; x < out.size(); ++x) out[x] = predict(x);
  return out;
}

Label online_predict(const OnlineLearner& state, Point x) { return state.predict(x); }

OnlineLearner online_update(OnlineLearner state, Point x, Label y) {
  state.observe(x, y);
  return state;
}

TreeAdversary::TreeAdversary(LittlestoneTree tree) : tree_(std::move(tree)) {}

Point TreeAdversary::current_point() const {
  if (exhausted()) throw AdversaryExhausted();
  return tree_.at(path_);
}

Constraint TreeAdversary::next(Label learner_prediction) {
  const Point x = current_point();
  const Label y = static_cast<Label>(1 - learner_prediction);
  path_.push_back(y);
  return {x, y};
}

Constraint adversary_next(TreeAdversary& adv, Label learner_prediction) { return adv.next(learner_prediction); }

std::vector<DuelRound> duel(OnlineLearner learner, TreeAdversary adversary) {
  std::vector<DuelRound> out;
  while (!adversary.exhausted()) {
    const Point x = adversary.current_point();
    const Label prediction = learner.predict(x);
    const Constraint c = adversary.next(prediction);
    const bool mistake = learner.observe(c.point, c.label);
    out.push_back({out.size() + 1, c.point, prediction, c.label, mistake});
  }
  return out;
}

}  // namespace ulearn
