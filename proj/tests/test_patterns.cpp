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

#include <map>
#include <random>

#include "oracles.hpp"
#include "ulearn/errors.hpp"
#include "ulearn/generators.hpp"
#include "ulearn/patterns.hpp"

namespace ulearn {
namespace {

std::shared_ptr<const GameSolver> Solver(const ConceptClass& cls) {
  return std::make_shared<const GameSolver>(std::make_shared<const ConceptClass>(cls));
}

ForbiddenFn Constant(std::size_t arity, const std::string& bits) {
  const BitVector b = BitVector::FromString(bits);
  return ForbiddenFn{arity, [b](std::span<const Point>) { return b; }};
}

PatternSet Set(std::size_t arity, std::vector<std::string> bits) {
  std::vector<BitVector> v;
  for (const auto& s : bits) v.push_back(BitVector::FromString(s));
  return PatternSet(arity, std::move(v));
}

oracle::Rows RowsOf(const PatternSet& f) {
  oracle::Rows out;
  for (const BitVector& b : f) {
    oracle::Row r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = b.test(i);
    out.push_back(r);
  }
  return out;
}

TEST(VclMove, SingletonWinsAtOnce) {
  const ConceptClass one = ConceptClass::FromStrings({"0110"});
  const std::vector<Point> t{1};
  // The lexicographically smallest pattern not equal to h(x) = 1.
  EXPECT_EQ(vcl_move(one, VclPosition{}, t).ToString(), "0");
  const std::vector<Point> t0{0};
  EXPECT_EQ(vcl_move(one, VclPosition{}, t0).ToString(), "1");
}

TEST(VclMove, FullClassTieBreaksToZero) {
  const std::vector<Point> t{0};
  EXPECT_EQ(vcl_move(FullClass(2).expand(), VclPosition{}, t).ToString(), "0");
}

TEST(VclMove, ThresholdsReturnsUnrealizablePattern) {
  const ConceptClass th = Thresholds(4).expand();
  // Round 2 after committing label 0 on point 1: thresholds 2..4 remain,
  // realizing {11, 01, 00} on points (2, 3).
  VclPosition pos;
  pos.tuples.push_back({0});
  pos.patterns.push_back(BitVector::FromString("0"));
  const std::vector<Point> t{1, 2};
  const std::vector<Constraint> c{{0, 0}};
  EXPECT_EQ(project(restrict(th, c), t).size(), 3U);
  const BitVector move = vcl_move(th, pos, t);
  EXPECT_EQ(move.ToString(), "10");
  EXPECT_FALSE(project(restrict(th, c), t).contains(move));
}

TEST(Avoider, EmptyStreamIsFresh) {
  const PatternAvoider av(Solver(Thresholds(4).expand()));
  EXPECT_EQ(av.arity(), 1U);
  EXPECT_EQ(av.commits(), 0U);
  EXPECT_EQ(av, PatternAvoider(av));
}

TEST(Avoider, ArityMismatchIsUsageError) {
  const PatternAvoider av(Solver(Thresholds(4).expand()));
  const std::vector<Point> z{0, 1};
  EXPECT_THROW(av.forbidden(z), UsageError);
}

TEST(Avoider, SingletonCommitsBoundedAndForbidsComplement) {
  const ConceptClass one = ConceptClass::FromStrings({"10110"});
  PatternAvoider av(Solver(one));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const Point x = static_cast<Point>(rng() % 5);
    av = avoider_step(av, x, one.label(0, x));
  }
  EXPECT_EQ(av.commits(), 0U);
  for (Point x = 0; x < 5; ++x) {
    const std::vector<Point> z{x};
    EXPECT_EQ(av.forbidden(z).test(0), one.label(0, x) == 0);
  }
}

// Commits stop after finitely many steps on a realizable stream, and never
// exceed the VCL value of the class.
TEST(Avoider, CommitsStopOnRealizableStreams) {
  std::mt19937_64 rng(6);
  for (int iter = 0; iter < 60; ++iter) {
    const std::size_t m = 2 + rng() % 4;
    const oracle::Rows rows = oracle::random_class(rng, m, 1 + rng() % (std::size_t{1} << m));
    auto solver = Solver(oracle::class_of(rows, m));
    const int vcl = solver->vcl_value(solver->concept_class().all(), 1);
    PatternAvoider av(solver);
    const oracle::Row& target = rows[rng() % rows.size()];
    std::size_t last_commit = 0;
    for (std::size_t t = 1; t <= 3000; ++t) {
      const std::size_t before = av.commits();
      const Point x = static_cast<Point>(rng() % m);
      av.observe(x, static_cast<Label>(target[x]));
      if (av.commits() != before) last_commit = t;
    }
    EXPECT_LE(static_cast<int>(av.commits()), vcl);
    EXPECT_LT(last_commit, 1500U);
  }
}

TEST(BuildPatternClass, Examples) {
  const std::vector<Point> pts{0, 1, 2};
  const PatternSet f = build_pattern_class(pts, Constant(1, "1"));
  ASSERT_EQ(f.size(), 1U);
  EXPECT_EQ(f[0].ToString(), "000");
  const std::vector<Point> two{0, 1};
  EXPECT_EQ(build_pattern_class(two, Constant(2, "01")), Set(2, {"00", "11"}));
}

TEST(BuildPatternClass, BudgetError) {
  const std::vector<Point> pts(16, 0);
  EnumerationBudget tiny;
  tiny.max_nodes = 10;
  EXPECT_THROW(build_pattern_class(pts, Constant(3, "111"), tiny), BudgetError);
}

TEST(Orient, Examples) {
  const OneInclusionGraph path = orient(OneInclusionGraph(Set(2, {"00", "01", "11"})));
  EXPECT_EQ(path.edges().size(), 2U);
  EXPECT_EQ(path.max_out_degree(), 1U);
  const OneInclusionGraph square = orient(OneInclusionGraph(Set(2, {"00", "01", "10", "11"})));
  EXPECT_EQ(square.edges().size(), 4U);
  EXPECT_EQ(square.max_out_degree(), 1U);
  const OneInclusionGraph dot = orient(OneInclusionGraph(Set(3, {"010"})));
  EXPECT_TRUE(dot.edges().empty());
  EXPECT_EQ(dot.max_out_degree(), 0U);
}

// Optimal against brute force over all orientations, and never above the
// VC dimension of the vertex set.
TEST(Orient, OptimalAndBelowVc) {
  std::mt19937_64 rng(7);
  int tested = 0;
  while (tested < 150) {
    const std::size_t m = 2 + rng() % 4;
    const oracle::Rows rows = oracle::random_class(rng, m, 1 + rng() % (std::size_t{1} << m));
    const PatternSet f = project(oracle::class_of(rows, m), [&] {
      std::vector<Point> all(m);
      for (std::size_t i = 0; i < m; ++i) all[i] = static_cast<Point>(i);
      return all;
    }());
    const OneInclusionGraph g = orient(OneInclusionGraph(f));
    if (g.edges().size() > 20) continue;
    ++tested;
    EXPECT_EQ(static_cast<int>(g.max_out_degree()), oracle::min_max_outdegree(RowsOf(f)));
    EXPECT_LE(static_cast<int>(g.max_out_degree()), oracle::vc(RowsOf(f), m));
  }
}

TEST(Predict, Examples) {
  const OneInclusionGraph path = orient(OneInclusionGraph(Set(2, {"00", "01", "11"})));
  const std::vector<CoordLabel> first0{{0, 0}};
  const std::size_t e = path.edge_between(path.vertices().index_of(BitVector::FromString("00")),
                                          path.vertices().index_of(BitVector::FromString("01")));
  ASSERT_NE(e, BitVector::npos);
  const Label head_bit = path.vertices()[path.edges()[e].head].test(1) ? 1 : 0;
  EXPECT_EQ(one_inclusion_predict(path, first0, 1), head_bit);

  const OneInclusionGraph pair = orient(OneInclusionGraph(Set(2, {"00", "11"})));
  const std::vector<CoordLabel> first1{{0, 1}};
  EXPECT_EQ(one_inclusion_predict(pair, first1, 1), 1);

  const OneInclusionGraph lone = orient(OneInclusionGraph(Set(2, {"11"})));
  EXPECT_EQ(one_inclusion_predict(lone, first0, 1), 0);
}

// Leave-one-out mistakes below t on pattern classes from random tables.
TEST(Predict, LeaveOneOutBound) {
  std::mt19937_64 rng(8);
  for (int iter = 0; iter < 80; ++iter) {
    const std::size_t t = 1 + rng() % 3;
    const std::size_t n = t + rng() % (7 - t);
    auto table = std::make_shared<std::map<std::vector<Point>, BitVector>>();
    const std::uint64_t seed = rng();
    const ForbiddenFn g{t, [table, seed, t](std::span<const Point> z) {
                          std::vector<Point> key(z.begin(), z.end());
                          auto it = table->find(key);
                          if (it != table->end()) return it->second;
                          std::mt19937_64 local(seed ^ (key.size() * 977 + key[0] * 131 + key.back()));
                          BitVector b(t);
                          for (std::size_t i = 0; i < t; ++i) b.set(i, local() & 1U);
                          return table->emplace(key, b).first->second;
                        }};
    std::vector<Point> pts(n);
    for (Point& p : pts) p = static_cast<Point>(rng() % 5);
    const PatternSet f = build_pattern_class(pts, g);
    if (f.empty()) continue;
    const OneInclusionGraph graph = orient(OneInclusionGraph(f));
    EXPECT_LT(graph.max_out_degree(), t);
    for (const BitVector& truth : f) {
      std::size_t mistakes = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<CoordLabel> lab;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) lab.push_back({j, static_cast<Label>(truth.test(j))});
        }
        mistakes += one_inclusion_predict(graph, lab, i) != truth.test(i);
      }
      EXPECT_LT(mistakes, t);
    }
  }
}

// The incremental predictor agrees with building the class on the labeled
// points plus the query and predicting directly.
TEST(Predictor, AgreesWithDirectConstruction) {
  std::mt19937_64 rng(9);
  for (int iter = 0; iter < 40; ++iter) {
    const std::size_t m = 3 + rng() % 3;
    const oracle::Rows rows = oracle::random_class(rng, m, 2 + rng() % ((std::size_t{1} << m) - 1));
    auto solver = Solver(oracle::class_of(rows, m));
    PatternAvoider av(solver);
    const oracle::Row& target = rows[rng() % rows.size()];
    for (int s = 0; s < 10; ++s) {
      const Point x = static_cast<Point>(rng() % m);
      av.observe(x, static_cast<Label>(target[x]));
    }
    const ForbiddenFn g = av.as_function();
    std::vector<LabeledPoint> labeled;
    for (std::size_t j = 0; j < 5; ++j) {
      const Point x = static_cast<Point>(rng() % m);
      labeled.push_back({x, static_cast<Label>(target[x])});
    }
    const OneInclusionPredictor pred(g, labeled);
    for (Point q = 0; q < m; ++q) {
      std::vector<Point> pts;
      std::vector<CoordLabel> lab;
      for (std::size_t j = 0; j < labeled.size(); ++j) {
        pts.push_back(labeled[j].point);
        lab.push_back({j, labeled[j].label});
      }
      pts.push_back(q);
      const OneInclusionGraph graph = orient(OneInclusionGraph(build_pattern_class(pts, g)));
      EXPECT_EQ(pred.predict(q), one_inclusion_predict(graph, lab, labeled.size()));
    }
  }
}

}  // namespace
}  // namespace ulearn
