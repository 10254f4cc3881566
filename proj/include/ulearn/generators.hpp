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

// Closed-form hypothesis families. Each answers membership, consistency and
// projection without materializing the class; expand() gives the explicit
// matrix when it is small enough.

#ifndef ULEARN_GENERATORS_HPP_
#define ULEARN_GENERATORS_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ulearn/core.hpp"

namespace ulearn {

enum class Verdict { kExponential, kLinear, kArbitrarilySlow };
std::string to_string(Verdict v);

class Generator {
 public:
  virtual ~Generator() = default;

  virtual std::string family() const = 0;
  virtual const Domain& domain() const = 0;

  // Number of hypotheses, if it fits in 64 bits.
  virtual std::optional<std::uint64_t> cardinality() const = 0;
  virtual bool expandable() const;
  // Explicit matrix; throws BudgetError when too large.
  virtual ConceptClass expand() const = 0;

  // Is some hypothesis consistent with all constraints?
  virtual bool consistent(std::span<const Constraint> constraints) const = 0;
  // Labels of the canonical first hypothesis consistent with the
  // constraints, or nullopt.
  virtual std::optional<BitVector> first_consistent(std::span<const Constraint> constraints) const = 0;
  virtual PatternSet project(std::span<const Point> points) const;

  // Classification of the untruncated family, or nullopt for an explicit
  // finite class (which is always exponential).
  virtual std::optional<Verdict> structural_verdict() const { return std::nullopt; }
  virtual std::string structural_reason() const { return {}; }

 protected:
  void CheckPoints(std::span<const Constraint> constraints) const;
  static constexpr std::uint64_t kExpandLimit = std::uint64_t{1} << 20;
};

// An explicit matrix.
class ExplicitClass final : public Generator {
 public:
  explicit ExplicitClass(ConceptClass cls) : cls_(std::move(cls)) {}
  std::string family() const override { return "matrix"; }
  const Domain& domain() const override { return cls_.domain(); }
  std::optional<std::uint64_t> cardinality() const override { return cls_.size(); }
  bool expandable() const override { return true; }
  ConceptClass expand() const override { return cls_; }
  bool consistent(std::span<const Constraint> constraints) const override;
  std::optional<BitVector> first_consistent(std::span<const Constraint> constraints) const override;
  PatternSet project(std::span<const Point> points) const override;

 private:
  ConceptClass cls_;
};

// h_t(x) = 1{x >= t} for t in 1..M, points 1..M. With `dyadic` the points
// are the grid j/2^levels of (0,1] instead of the integers.
class Thresholds final : public Generator {
 public:
  explicit Thresholds(std::size_t m);
  static Thresholds Dyadic(std::size_t levels);

  std::string family() const override { return dyadic_ ? "real_thresholds" : "thresholds"; }
  const Domain& domain() const override { return domain_; }
  std::optional<std::uint64_t> cardinality() const override { return domain_.size(); }
  ConceptClass expand() const override;
  bool consistent(std::span<const Constraint> constraints) const override;
  std::optional<BitVector> first_consistent(std::span<const Constraint> constraints) const override;
  PatternSet project(std::span<const Point> points) const override;
  std::optional<Verdict> structural_verdict() const override;
  std::string structural_reason() const override;

 private:
  Thresholds(Domain domain, bool dyadic) : domain_(std::move(domain)), dyadic_(dyadic) {}
  // Feasible threshold indices [lo, hi] (0-based t-1), empty when lo > hi.
  std::pair<std::size_t, std::size_t> Window(std::span<const Constraint> constraints) const;
  Domain domain_;
  bool dyadic_ = false;
};

// h_z(x) = 1{x <= z} for z in 1..M.
class HalfIntervals final : public Generator {
 public:
  explicit HalfIntervals(std::size_t m);
  std::string family() const override { return "half_intervals"; }
  const Domain& domain() const override { return domain_; }
  std::optional<std::uint64_t> cardinality() const override { return domain_.size(); }
  ConceptClass expand() const override;
  bool consistent(std::span<const Constraint> constraints) const override;
  std::optional<BitVector> first_consistent(std::span<const Constraint> constraints) const override;
  std::optional<Verdict> structural_verdict() const override { return Verdict::kExponential; }
  std::string structural_reason() const override;

 private:
  Domain domain_;
};

// Indicators of single points.
class Singletons final : public Generator {
 public:
  explicit Singletons(std::size_t m);
  std::string family() const override { return "singletons"; }
  const Domain& domain() const override { return domain_; }
  std::optional<std::uint64_t> cardinality() const override { return domain_.size(); }
  ConceptClass expand() const override;
  bool consistent(std::span<const Constraint> constraints) const override;
  std::optional<BitVector> first_consistent(std::span<const Constraint> constraints) const override;
  std::optional<Verdict> structural_verdict() const override { return Verdict::kExponential; }
  std::string structural_reason() const override;

 private:
  Domain domain_;
};

// Every function on M points.
class FullClass final : public Generator {
 public:
  explicit FullClass(std::size_t m);
  std::string family() const override { return "full"; }
  const Domain& domain() const override { return domain_; }
  std::optional<std::uint64_t> cardinality() const override;
  ConceptClass expand() const override;
  bool consistent(std::span<const Constraint> constraints) const override;
  std::optional<BitVector> first_consistent(std::span<const Constraint> constraints) const override;
  PatternSet project(std::span<const Point> points) const override;
  std::optional<Verdict> structural_verdict() const override { return Verdict::kArbitrarilySlow; }
  std::string structural_reason() const override;

 private:
  Domain domain_;
};

// Disjoint blocks X_1..X_K with |X_k| = k; the class is every indicator of
// a subset of a single block (the all-zero function once).
class DisjointPowerset final : public Generator {
 public:
  explicit DisjointPowerset(std::size_t blocks);
  std::string family() const override { return "disjoint_powerset"; }
  const Domain& domain() const override { return domain_; }
  std::optional<std::uint64_t> cardinality() const override;
  ConceptClass expand() const override;
  bool consistent(std::span<const Constraint> constraints) const override;
  std::optional<BitVector> first_consistent(std::span<const Constraint> constraints) const override;
  PatternSet project(std::span<const Point> points) const override;
  std::optional<Verdict> structural_verdict() const override { return Verdict::kExponential; }
  std::string structural_reason() const override;

  std::size_t blocks() const { return blocks_; }
  std::size_t block_of(Point p) const { return block_of_[p]; }  // 1-based
  Point block_start(std::size_t k) const { return static_cast<Point>(k * (k - 1) / 2); }

 private:
  std::size_t blocks_;
  Domain domain_;
  std::vector<std::size_t> block_of_;
};

// Blocks X_i of size 2^i for the listed exponents i, followed by one extra
// point x'. H_i holds the indicators 1_I with I ⊆ X_i and |I| >= 2^(i-1);
// the class is the union of the H_i.
class ErmFailureClass final : public Generator {
 public:
  explicit ErmFailureClass(std::vector<unsigned> exponents);
  std::string family() const override { return "erm_failure"; }
  const Domain& domain() const override { return domain_; }
  std::optional<std::uint64_t> cardinality() const override;
  bool expandable() const override;
  ConceptClass expand() const override;
  bool consistent(std::span<const Constraint> constraints) const override;
  std::optional<BitVector> first_consistent(std::span<const Constraint> constraints) const override;
  std::optional<Verdict> structural_verdict() const override { return Verdict::kExponential; }
  std::string structural_reason() const override;

  const std::vector<unsigned>& exponents() const { return exponents_; }
  std::size_t block_count() const { return exponents_.size(); }
  Point block_start(std::size_t b) const { return starts_[b]; }
  std::size_t block_size(std::size_t b) const { return std::size_t{1} << exponents_[b]; }
  // Block index of p, or nullopt for x'.
  std::optional<std::size_t> block_of(Point p) const;
  Point extra_point() const { return static_cast<Point>(domain_.size() - 1); }
  // Labels of 1_I for I = the given points of block b.
  BitVector indicator(std::span<const Point> members) const;

 private:
  std::vector<unsigned> exponents_;
  std::vector<Point> starts_;
  Domain domain_;
};

// Depth-D truncation of the tree-structured class: a binary tree whose
// depth-k nodes u carry points x_u^0..x_u^k; each hypothesis follows a
// branch y_1, y_2, ... (y_k ∈ {0,1}^k) and labels x_u^i with y_{k+1}^i on
// the branch nodes, 0 elsewhere.
class TreeStructured final : public Generator {
 public:
  explicit TreeStructured(std::size_t depth);
  std::string family() const override { return "tree_structured"; }
  const Domain& domain() const override { return domain_; }
  std::optional<std::uint64_t> cardinality() const override;
  ConceptClass expand() const override;
  bool consistent(std::span<const Constraint> constraints) const override;
  std::optional<BitVector> first_consistent(std::span<const Constraint> constraints) const override;
  std::optional<Verdict> structural_verdict() const override { return Verdict::kArbitrarilySlow; }
  std::string structural_reason() const override;

  std::size_t depth() const { return depth_; }
  std::size_t node_count() const { return node_depth_.size(); }
  std::size_t node_depth(std::size_t node) const { return node_depth_[node]; }
  // Points x_u^0..x_u^k of a node, consecutive ids.
  Point node_point(std::size_t node, std::size_t i) const { return node_first_[node] + static_cast<Point>(i); }
  // Child of a depth-k node reached by the (k+1)-bit pattern `code`
  // (coordinate 0 most significant).
  std::size_t child(std::size_t node, std::uint64_t code) const { return node_child_[node] + code; }
  std::size_t node_of(Point p) const { return point_node_[p]; }

 private:
  struct Search;
  std::size_t depth_;
  Domain domain_;
  std::vector<std::size_t> node_depth_, node_child_, point_node_;
  std::vector<Point> node_first_;
};

// Expands the generator when possible, otherwise throws BudgetError.
std::shared_ptr<const ConceptClass> expand_shared(const Generator& g);

}  // namespace ulearn

#endif  // ULEARN_GENERATORS_HPP_
