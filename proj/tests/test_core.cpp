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

#include <memory>
#include <random>
#include <set>

#include "oracles.hpp"
#include "ulearn/core.hpp"
#include "ulearn/errors.hpp"
#include "ulearn/generators.hpp"

namespace ulearn {
namespace {

Point P(const Generator& g, const std::string& name) { return *g.domain().find(name); }

TEST(BitVector, StringRoundTripAndOrder) {
  const BitVector b = BitVector::FromString("0110");
  EXPECT_EQ(b.ToString(), "0110");
  EXPECT_TRUE(b.test(1));
  EXPECT_FALSE(b.test(0));
  EXPECT_EQ(b.count(), 2U);
  EXPECT_LT(BitVector::FromString("0111"), BitVector::FromString("1000"));
  EXPECT_EQ((~b).ToString(), "1001");
}

TEST(BitVector, WordBoundary) {
  BitVector b(130);
  b.set(64);
  b.set(129);
  EXPECT_EQ(b.find_first(), 64U);
  EXPECT_EQ(b.find_next(65), 129U);
  EXPECT_EQ(b.find_next(130), BitVector::npos);
  EXPECT_EQ((~b).count(), 128U);
  b.push_back(true);
  EXPECT_EQ(b.size(), 131U);
  EXPECT_EQ(b.count(), 3U);
}

TEST(Restrict, ThresholdsConstraintKeepsTwo) {
  const Thresholds gen(4);
  const ConceptClass cls = gen.expand();
  const std::vector<Constraint> c{{P(gen, "2"), 1}};
  const ConceptClass r = restrict(cls, c);
  ASSERT_EQ(r.size(), 2U);
  // h_1 = 1111 and h_2 = 0111.
  EXPECT_EQ(r.row(0).ToString(), "1111");
  EXPECT_EQ(r.row(1).ToString(), "0111");
}

TEST(Restrict, EmptyConstraintsIsIdentity) {
  const ConceptClass cls = ConceptClass::FromStrings({"010", "110", "001"});
  const ConceptClass r = restrict(cls, {});
  EXPECT_EQ(r.rows(), cls.rows());
}

TEST(Restrict, ContradictionIsEmpty) {
  const ConceptClass cls = FullClass(2).expand();
  const std::vector<Constraint> c{{0, 0}, {0, 1}};
  EXPECT_TRUE(restrict(cls, c).empty());
}

TEST(Restrict, UnknownPointIsDomainError) {
  const ConceptClass cls = FullClass(2).expand();
  const std::vector<Constraint> c{{7, 0}};
  EXPECT_THROW(restrict(cls, c), DomainError);
}

TEST(Project, ThresholdsOnThree) {
  const ConceptClass cls = Thresholds(3).expand();
  const std::vector<Point> pts{0, 1, 2};
  const PatternSet ps = project(cls, pts);
  ASSERT_EQ(ps.size(), 3U);
  EXPECT_TRUE(ps.contains(BitVector::FromString("111")));
  EXPECT_TRUE(ps.contains(BitVector::FromString("011")));
  EXPECT_TRUE(ps.contains(BitVector::FromString("001")));
}

TEST(Project, SingletonAndFull) {
  const ConceptClass one = ConceptClass::FromStrings({"1011"});
  const std::vector<Point> t{3, 1, 0};
  EXPECT_EQ(project(one, t).size(), 1U);
  const std::vector<Point> ab{0, 1};
  EXPECT_EQ(project(FullClass(2).expand(), ab).size(), 4U);
  const std::vector<Point> bad{0, 9};
  EXPECT_THROW(project(one, bad), DomainError);
}

TEST(VcDimension, Examples) {
  for (std::size_t m : {2, 5, 9}) EXPECT_EQ(vc_dimension(Thresholds(m).expand(), 10).value, 1);
  EXPECT_EQ(vc_dimension(FullClass(3).expand(), 10).value, 3);
  EXPECT_EQ(vc_dimension(ConceptClass::FromStrings({"0110"}), 10).value, 0);
  const Capped capped = vc_dimension(FullClass(4).expand(), 2);
  EXPECT_EQ(capped.value, 2);
  EXPECT_TRUE(capped.at_least);
}

// Restriction is exactly row filtering and projection is the set of row
// restrictions, on random classes.
TEST(CoreProperties, RestrictAndProjectMatchFiltering) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t m = 1 + rng() % 7;
    const oracle::Rows rows = oracle::random_class(rng, m, 1 + rng() % std::min<std::size_t>(40, std::size_t{1} << m));
    const ConceptClass cls = oracle::class_of(rows, m);
    std::vector<Constraint> cs;
    for (std::size_t j = rng() % 3; j > 0; --j) cs.push_back({static_cast<Point>(rng() % m), static_cast<Label>(rng() & 1)});
    std::size_t keep = 0;
    for (const oracle::Row& r : rows) {
      bool ok = true;
      for (const Constraint& c : cs) ok = ok && r[c.point] == c.label;
      keep += ok ? 1 : 0;
    }
    EXPECT_EQ(restrict(cls, cs).size(), keep);
    std::vector<Point> tuple;
    for (std::size_t j = 1 + rng() % 3; j > 0; --j) tuple.push_back(static_cast<Point>(rng() % m));
    std::set<std::vector<int>> want;
    for (const oracle::Row& r : rows) {
      std::vector<int> pat;
      for (Point p : tuple) pat.push_back(r[p]);
      want.insert(pat);
    }
    EXPECT_EQ(project(cls, tuple).size(), want.size());
  }
}

TEST(Domain, NamesAndLookup) {
  const Domain d(std::vector<std::string>{"a", "b"});
  EXPECT_EQ(*d.find("b"), 1U);
  EXPECT_FALSE(d.find("z").has_value());
  EXPECT_THROW(d.check(2), DomainError);
}

// Closed-form consistency and projection agree with the expanded matrix.
TEST(Generators, ClosedFormsMatchExpansion) {
  std::vector<std::unique_ptr<Generator>> gens;
  gens.push_back(std::make_unique<Thresholds>(6));
  gens.push_back(std::make_unique<Thresholds>(Thresholds::Dyadic(3)));
  gens.push_back(std::make_unique<HalfIntervals>(5));
  gens.push_back(std::make_unique<Singletons>(5));
  gens.push_back(std::make_unique<FullClass>(4));
  gens.push_back(std::make_unique<DisjointPowerset>(3));
  gens.push_back(std::make_unique<ErmFailureClass>(std::vector<unsigned>{1, 2}));
  gens.push_back(std::make_unique<TreeStructured>(2));
  std::mt19937_64 rng(3);
  for (const auto& g : gens) {
    const ConceptClass cls = g->expand();
    const std::size_t m = g->domain().size();
    EXPECT_EQ(g->cardinality().value_or(0), cls.size()) << g->family();
    for (int iter = 0; iter < 200; ++iter) {
      std::vector<Constraint> cs;
      for (std::size_t j = rng() % 4; j > 0; --j) cs.push_back({static_cast<Point>(rng() % m), static_cast<Label>(rng() & 1)});
      const BitVector members = cls.consistent(cs);
      ASSERT_EQ(g->consistent(cs), members.any()) << g->family();
      const auto first = g->first_consistent(cs);
      ASSERT_EQ(first.has_value(), members.any()) << g->family();
      if (first) EXPECT_EQ(*first, cls.row(members.find_first())) << g->family();
      std::vector<Point> tuple;
      for (std::size_t j = 1 + rng() % 3; j > 0; --j) tuple.push_back(static_cast<Point>(rng() % m));
      EXPECT_EQ(g->project(tuple), project(cls, tuple)) << g->family();
    }
  }
}

TEST(Generators, DisjointPowersetShape) {
  const DisjointPowerset g(3);
  EXPECT_EQ(g.domain().size(), 6U);
  // Blocks of size 1, 2, 3: 1 + 3 + 7 nonzero indicators plus the zero function.
  EXPECT_EQ(g.expand().size(), 12U);
  EXPECT_EQ(g.block_of(0), 1U);
  EXPECT_EQ(g.block_of(5), 3U);
}

TEST(Generators, StructuralVerdicts) {
  EXPECT_EQ(DisjointPowerset(3).structural_verdict(), Verdict::kExponential);
  EXPECT_EQ(Thresholds::Dyadic(3).structural_verdict(), Verdict::kLinear);
  EXPECT_EQ(TreeStructured(2).structural_verdict(), Verdict::kArbitrarilySlow);
  EXPECT_EQ(to_string(Verdict::kArbitrarilySlow), "arbitrarily_slow");
}

}  // namespace
}  // namespace ulearn
