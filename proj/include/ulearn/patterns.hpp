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

// Pattern avoidance and one-inclusion prediction.
//
// A PatternAvoider plays the VCL game against the data stream: it keeps a
// window of the last τ examples and, whenever the labels in the window
// equal the pattern its strategy forbids, commits the window as the next
// game move and grows τ. Its forbidden-pattern function then feeds the
// one-inclusion predictor: the patterns avoiding it on every ordered
// τ-tuple of distinct coordinates form a class of VC dimension < τ, whose
// one-inclusion graph is oriented with small out-degree.

#ifndef ULEARN_PATTERNS_HPP_
#define ULEARN_PATTERNS_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ulearn/core.hpp"
#include "ulearn/trees.hpp"

namespace ulearn {

// Committed VCL game moves: tuple s has s points.
struct VclPosition {
  std::vector<std::vector<Point>> tuples;
  std::vector<BitVector> patterns;
  std::size_t round() const { return tuples.size() + 1; }
};

// Strategy move at a position for a tuple of width round().
BitVector vcl_move(const GameSolver& solver, const VclPosition& position, std::span<const Point> tuple);
BitVector vcl_move(const ConceptClass& cls, const VclPosition& position, std::span<const Point> tuple,
                   SearchBudget budget = {});

// A forbidden-pattern function X^arity -> {0,1}^arity.
struct ForbiddenFn {
  std::size_t arity = 1;
  std::function<BitVector(std::span<const Point>)> fn;
  BitVector operator()(std::span<const Point> z) const { return fn(z); }
};

class PatternAvoider {
 public:
  explicit PatternAvoider(std::shared_ptr<const GameSolver> solver);

  std::size_t arity() const { return position_.round(); }
  std::size_t commits() const { return position_.tuples.size(); }
  const VclPosition& position() const { return position_; }
  // Class restricted by the committed moves.
  const BitVector& members() const { return members_; }

  // Throws UsageError unless |z| == arity().
  BitVector forbidden(std::span<const Point> z) const;
  void observe(Point x, Label y);

  // Snapshot of the current forbidden-pattern function.
  ForbiddenFn as_function() const;

  friend bool operator==(const PatternAvoider& a, const PatternAvoider& b) {
    return a.solver_ == b.solver_ && a.position_.tuples == b.position_.tuples &&
           a.position_.patterns == b.position_.patterns && a.window_ == b.window_;
  }

 private:
  std::shared_ptr<const GameSolver> solver_;
  VclPosition position_;
  BitVector members_;
  std::deque<LabeledPoint> window_;  // last arity() examples
};

PatternAvoider avoider_step(PatternAvoider av, Point x, Label y);

struct EnumerationBudget {
  // Depth-first search nodes while enumerating a pattern class.
  std::uint64_t max_nodes = std::uint64_t{1} << 22;
};

// All patterns f over the points with g(x_{i_1..i_t}) != f(i_1..i_t) for
// every ordered tuple of pairwise distinct indices. Throws BudgetError.
PatternSet build_pattern_class(std::span<const Point> points, const ForbiddenFn& g,
                               EnumerationBudget budget = {});

class OneInclusionGraph {
 public:
  // Edge between vertices differing only at `coord`; `zero` has bit 0
  // there. `head` is the vertex the edge points to once oriented.
  struct Edge {
    std::size_t zero;
    std::size_t one;
    std::size_t coord;
    std::size_t head;
  };

  explicit OneInclusionGraph(PatternSet vertices);

  const PatternSet& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<Edge>& mutable_edges() { return edges_; }
  bool oriented() const { return oriented_; }
  void set_oriented(bool v) { oriented_ = v; }

  // Out-degree = number of edges whose head is the other endpoint.
  std::vector<std::size_t> out_degrees() const;
  std::size_t max_out_degree() const;
  // Edge joining two vertices, or npos.
  std::size_t edge_between(std::size_t a, std::size_t b) const;

 private:
  PatternSet vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
  bool oriented_ = false;
};

// Minimizes the maximum out-degree: binary search on the bound with a
// max-flow feasibility test. Deterministic.
OneInclusionGraph orient(OneInclusionGraph graph);

struct CoordLabel {
  std::size_t index;
  Label label;
};

// Label for `query` given the other coordinates' labels: the forced bit
// when one completion exists, the head's bit when both do, 0 when none.
Label one_inclusion_predict(const OneInclusionGraph& graph, std::span<const CoordLabel> labeled,
                            std::size_t query);

// One-inclusion predictor over a fixed labeled sequence plus one query
// point (the last coordinate), built incrementally so each query costs an
// orientation only when both completions are allowed.
class OneInclusionPredictor {
 public:
  OneInclusionPredictor(ForbiddenFn g, std::vector<LabeledPoint> labeled, EnumerationBudget budget = {});
  ~OneInclusionPredictor();
  OneInclusionPredictor(const OneInclusionPredictor&) = delete;
  OneInclusionPredictor& operator=(const OneInclusionPredictor&) = delete;

  Label predict(Point query) const;
  std::size_t arity() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ulearn

#endif  // ULEARN_PATTERNS_HPP_
