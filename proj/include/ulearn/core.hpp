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

// Finite domains, explicit concept classes, restriction, projection and the
// VC dimension.

#ifndef ULEARN_CORE_HPP_
#define ULEARN_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ulearn/bits.hpp"

namespace ulearn {

using Point = std::uint32_t;
using Label = std::uint8_t;

struct Constraint {
  Point point = 0;
  Label label = 0;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// A labeled example and a constraint are the same pair.
using LabeledPoint = Constraint;

// Result of a capped search. When `at_least` is set the true value is
// at least `value` (which then equals the cap).
struct Capped {
  int value = 0;
  bool at_least = false;
  friend bool operator==(const Capped&, const Capped&) = default;
};

class Domain {
 public:
  // Points 0..size-1 named "0", "1", ...
  explicit Domain(std::size_t size);
  explicit Domain(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  bool contains(Point p) const { return p < names_.size(); }
  const std::string& name(Point p) const { return names_.at(p); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Point> find(const std::string& name) const;
  // Throws DomainError for an unknown point.
  void check(Point p) const;

  friend bool operator==(const Domain& a, const Domain& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Point> index_;
};

// An explicit finite class: one row per hypothesis, one bit per point.
// Duplicate rows are dropped; the first occurrence fixes the canonical order.
class ConceptClass {
 public:
  ConceptClass(Domain domain, const std::vector<BitVector>& rows);
  // Rows given as bit strings over points 0..len-1.
  static ConceptClass FromStrings(const std::vector<std::string>& rows, std::size_t domain_size = 0);

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const BitVector& row(std::size_t h) const { return rows_[h]; }
  const std::vector<BitVector>& rows() const { return rows_; }
  Label label(std::size_t h, Point x) const { return rows_[h].test(x) ? 1 : 0; }

  // Hypotheses labeling x with 1, as a set over hypothesis indices.
  const BitVector& ones(Point x) const { return columns_[x]; }
  BitVector all() const { return BitVector(size(), true); }

  // members ∩ {h : h(x) = y}
  BitVector consistent(const BitVector& members, Point x, Label y) const;
  BitVector consistent(std::span<const Constraint> constraints) const;

  ConceptClass subclass(const BitVector& members) const;

 private:
  Domain domain_;
  std::vector<BitVector> rows_;
  std::vector<BitVector> columns_;
};

// The distinct label patterns realized on an ordered tuple of points,
// kept sorted (lexicographic, first coordinate most significant).
class PatternSet {
 public:
  explicit PatternSet(std::size_t arity) : arity_(arity) {}
  PatternSet(std::size_t arity, std::vector<BitVector> patterns);

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }
  const std::vector<BitVector>& patterns() const { return patterns_; }
  const BitVector& operator[](std::size_t i) const { return patterns_[i]; }
  auto begin() const { return patterns_.begin(); }
  auto end() const { return patterns_.end(); }
  bool contains(const BitVector& p) const;
  // Position of p in sorted order, or npos.
  std::size_t index_of(const BitVector& p) const;

  // The patterns as a class over the coordinates 0..arity-1.
  ConceptClass as_class() const;

  friend bool operator==(const PatternSet&, const PatternSet&) = default;

 private:
  std::size_t arity_;
  std::vector<BitVector> patterns_;
};

ConceptClass restrict(const ConceptClass& cls, std::span<const Constraint> constraints);

PatternSet project(const ConceptClass& cls, std::span<const Point> points);

// Largest d <= cap such that some d points are shattered.
Capped vc_dimension(const ConceptClass& cls, int cap);

}  // namespace ulearn

#endif  // ULEARN_CORE_HPP_
