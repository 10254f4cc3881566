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

// Littlestone and VCL trees, finite game values and the value-decreasing
// move rule.
//
// Both values are computed by memoized recursion over sub-classes, each
// sub-class represented as a bit set over the hypotheses of a fixed root
// class:
//
//   LD(G)    = -1 if G = ∅, else max(0, max_x 1 + min_y LD(G_{x,y}))
//   D(G, τ)  = -1 if G = ∅, else max(0, max over τ-tuples shattering G of
//              1 + min_η D(G_{x,η}, τ+1))
//
// D(H, 1) is the depth of the deepest VCL tree.

#ifndef ULEARN_TREES_HPP_
#define ULEARN_TREES_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "ulearn/core.hpp"

namespace ulearn {

struct SearchBudget {
  // Maximum tuple-extension steps per top-level VCL query.
  std::uint64_t vcl_nodes = std::uint64_t{1} << 24;
};

// Complete binary tree; node for prefix u (|u| = k) stored at index
// 2^k - 1 + value(u), with u_1 the most significant bit.
struct LittlestoneTree {
  int depth = 0;
  std::vector<Point> nodes;

  Point at(std::span<const Label> prefix) const;
  static std::size_t index(std::span<const Label> prefix);
};

// Depth-k nodes carry (k+1)-tuples; a node at depth k has 2^(k+1)
// children, addressed by the pattern code with coordinate 0 most
// significant.
struct VclTree {
  struct Node {
    std::vector<Point> tuple;
    std::size_t first_child = 0;  // index of child with code 0
  };
  int depth = 0;
  std::vector<Node> nodes;  // nodes[0] is the root when depth >= 1

  // Node reached by following patterns y_1, ..., y_k (|y_j| = j).
  std::size_t node_at(std::span<const BitVector> path) const;
};

// Pattern <-> integer code, coordinate 0 most significant.
std::uint64_t pattern_code(const BitVector& pattern);
BitVector code_pattern(std::uint64_t code, std::size_t width);

// Shared memoized solver over one root class. Thread-safe.
class GameSolver {
 public:
  explicit GameSolver(std::shared_ptr<const ConceptClass> cls, SearchBudget budget = {});

  const ConceptClass& concept_class() const { return *cls_; }
  std::shared_ptr<const ConceptClass> shared_class() const { return cls_; }
  const SearchBudget& budget() const { return budget_; }

  // Littlestone dimension of the sub-class `members` (-1 if empty).
  int littlestone(const BitVector& members) const;
  // Label minimizing littlestone(members restricted to (x, y)); ties to 0.
  Label littlestone_move(const BitVector& members, Point x) const;

  // D(members, round); throws BudgetError.
  int vcl_value(const BitVector& members, std::size_t round) const;
  // Lexicographically smallest pattern minimizing
  // D(members restricted to (tuple, η), |tuple| + 1).
  BitVector vcl_move(const BitVector& members, std::span<const Point> tuple) const;

  // members ∩ {h : h(tuple) = pattern}
  BitVector cell(const BitVector& members, std::span<const Point> tuple, const BitVector& pattern) const;

  std::size_t memo_size() const;

 private:
  struct VclKey {
    BitVector members;
    std::size_t round;
    friend bool operator==(const VclKey&, const VclKey&) = default;
  };
  struct VclKeyHash {
    std::size_t operator()(const VclKey& k) const { return k.members.hash() * 31 + k.round; }
  };
  struct VclSearch;
  friend std::optional<VclTree> find_vcl_tree(const GameSolver& solver, int depth);

  int Littlestone(const BitVector& members) const;

  std::shared_ptr<const ConceptClass> cls_;
  SearchBudget budget_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<BitVector, int, BitVectorHash> ld_memo_;
  mutable std::unordered_map<VclKey, int, VclKeyHash> vcl_memo_;
};

// Constraint list with its cached game value.
struct GamePosition {
  std::vector<Constraint> constraints;
  Capped value;
};

Capped littlestone_dimension(const ConceptClass& cls, int cap);
std::optional<LittlestoneTree> find_littlestone_tree(const ConceptClass& cls, int depth);

Capped vcl_dimension(const ConceptClass& cls, int cap, SearchBudget budget = {});
std::optional<VclTree> find_vcl_tree(const ConceptClass& cls, int depth, SearchBudget budget = {});
// Same searches reusing a solver's memo.
std::optional<LittlestoneTree> find_littlestone_tree(const GameSolver& solver, int depth);
std::optional<VclTree> find_vcl_tree(const GameSolver& solver, int depth);

GamePosition make_position(const ConceptClass& cls, std::vector<Constraint> constraints);
// Throws StateError when the position is terminal (value -1).
Label gale_stewart_move(const ConceptClass& cls, const GamePosition& position, Point x);

// Independent witness checks: brute force over every root path.
bool is_littlestone_tree(const ConceptClass& cls, const LittlestoneTree& tree);
bool is_vcl_tree(const ConceptClass& cls, const VclTree& tree);

}  // namespace ulearn

#endif  // ULEARN_TREES_HPP_
