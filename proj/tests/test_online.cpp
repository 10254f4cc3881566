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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ulearn/errors.hpp"
#include "ulearn/generators.hpp"
#include "ulearn/online.hpp"

namespace ulearn {
namespace {

std::shared_ptr<const GameSolver> Solver(const ConceptClass& cls) {
  return std::make_shared<const GameSolver>(std::make_shared<const ConceptClass>(cls));
}

TEST(OnlinePredict, SingleHypothesisIsCopied) {
  const ConceptClass one = ConceptClass::FromStrings({"01101"});
  const OnlineLearner l(Solver(one));
  for (Point x = 0; x < 5; ++x) EXPECT_EQ(online_predict(l, x), one.label(0, x));
}

TEST(OnlinePredict, ThresholdsAtTwo) {
  const OnlineLearner l(Solver(Thresholds(4).expand()));
  EXPECT_EQ(online_predict(l, 1), 1);
}

TEST(OnlineUpdate, CorrectStepKeepsState) {
  const OnlineLearner l(Solver(Thresholds(4).expand()));
  const OnlineLearner next = online_update(l, 1, online_predict(l, 1));
  EXPECT_EQ(next, l);
  EXPECT_EQ(next.mistakes(), 0U);
}

TEST(OnlineUpdate, InconsistentExampleIsRealizabilityError) {
  OnlineLearner l(Solver(ConceptClass::FromStrings({"01"})));
  EXPECT_THROW(l.observe(0, 1), RealizabilityError);
}

TEST(OnlineUpdate, SingleHypothesisNeverErrs) {
  const ConceptClass one = ConceptClass::FromStrings({"1001"});
  OnlineLearner l(Solver(one));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const Point x = static_cast<Point>(rng() % 4);
    EXPECT_FALSE(l.observe(x, one.label(0, x)));
  }
}

// Predictions only change after a mistake.
TEST(OnlineUpdate, PredictorStableBetweenMistakes) {
  std::mt19937_64 rng(2);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t m = 2 + rng() % 6;
    const oracle::Rows rows = oracle::random_class(rng, m, 1 + rng() % std::min<std::size_t>(20, std::size_t{1} << m));
    OnlineLearner l(Solver(oracle::class_of(rows, m)));
    const oracle::Row& target = rows[rng() % rows.size()];
    std::size_t mistakes = 0;
    for (int t = 0; t < 30; ++t) {
      const auto before = l.labels();
      const Point x = static_cast<Point>(rng() % m);
      const bool err = l.observe(x, static_cast<Label>(target[x]));
      if (!err) EXPECT_EQ(l.labels(), before);
      mistakes += err ? 1 : 0;
    }
    EXPECT_LE(static_cast<int>(mistakes), oracle::littlestone(rows, m));
  }
}

TEST(Adversary, ThresholdsForceExactlyD) {
  for (int d = 1; d <= 5; ++d) {
    auto solver = Solver(Thresholds(std::size_t{1} << d).expand());
    auto tree = find_littlestone_tree(*solver, d);
    ASSERT_TRUE(tree.has_value());
    const auto rounds = duel(OnlineLearner(solver), TreeAdversary(*tree));
    ASSERT_EQ(rounds.size(), static_cast<std::size_t>(d));
    for (const DuelRound& r : rounds) EXPECT_TRUE(r.mistake);
  }
}

TEST(Adversary, AlwaysZeroLearnerGetsOnes) {
  const ConceptClass full = FullClass(3).expand();
  auto tree = find_littlestone_tree(full, 3);
  ASSERT_TRUE(tree.has_value());
  TreeAdversary adv(*tree);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(adversary_next(adv, 0).label, 1);
  EXPECT_TRUE(adv.exhausted());
  EXPECT_THROW(adversary_next(adv, 0), AdversaryExhausted);
}

TEST(Adversary, DepthOneAtMostOneMistake) {
  auto solver = Solver(Thresholds(2).expand());
  auto tree = find_littlestone_tree(*solver, 1);
  ASSERT_TRUE(tree.has_value());
  std::size_t mistakes = 0;
  for (const DuelRound& r : duel(OnlineLearner(solver), TreeAdversary(*tree))) mistakes += r.mistake;
  EXPECT_LE(mistakes, 1U);
}

// Mistakes never exceed LD against every adaptive adversary.
TEST(OnlineProperties, MistakeBoundExhaustive) {
  std::mt19937_64 rng(4);
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t m = 1 + rng() % 5;
    const oracle::Rows rows = oracle::random_class(rng, m, 1 + rng() % (std::size_t{1} << m));
    const OnlineLearner l(Solver(oracle::class_of(rows, m)));
    std::map<std::pair<std::vector<int>, std::uint64_t>, int> memo;
    const std::function<std::vector<int>(const OnlineLearner&)> key = [](const OnlineLearner& s) {
      std::vector<int> k;
      for (const Constraint& c : s.prefix()) k.push_back(static_cast<int>(2 * c.point + c.label));
      return k;
    };
    const std::uint64_t all = rows.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows.size()) - 1;
    EXPECT_LE(oracle::worst_case_mistakes(l, rows, all, m, key, memo), oracle::littlestone(rows, m));
  }
}

}  // namespace
}  // namespace ulearn
