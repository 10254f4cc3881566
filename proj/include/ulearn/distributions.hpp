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

#ifndef ULEARN_DISTRIBUTIONS_HPP_
#define ULEARN_DISTRIBUTIONS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ulearn/core.hpp"
#include "ulearn/exact.hpp"
#include "ulearn/generators.hpp"
#include "ulearn/learners.hpp"
#include "ulearn/rates.hpp"
#include "ulearn/trees.hpp"

namespace ulearn {

struct Atom {
  Point point;
  Label label;
  double prob;
};

// Finite-support distribution over labeled points together with a
// hypothesis that labels the whole support correctly.
class RealizableDistribution {
 public:
  // Merges repeated atoms. Throws ConstructionError on non-positive masses
  // or a total off 1 by more than 1e-12, DomainError on foreign points and
  // RealizabilityError when the certificate mislabels the support. `exact`,
  // when given, holds the exact masses in atom order.
  RealizableDistribution(Domain domain, std::vector<Atom> atoms, BitVector certificate, std::string name,
                         std::optional<std::vector<Rational>> exact = std::nullopt);

  const Domain& domain() const { return domain_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const BitVector& certificate() const { return certificate_; }
  const std::string& name() const { return name_; }
  const std::optional<std::vector<Rational>>& exact_masses() const { return exact_; }

  // Re-checks that the certificate has error 0.
  bool verify() const;

 private:
  Domain domain_;
  std::vector<Atom> atoms_;
  BitVector certificate_;
  std::string name_;
  std::optional<std::vector<Rational>> exact_;
};

// Σ_{atoms} prob · 1{h(x) != y}, clamped to [0, 1].
double exact_error(const Classifier& h, const RealizableDistribution& dist);
// Same sum in exact arithmetic; UsageError without exact masses.
Rational exact_error_rational(const Classifier& h, const RealizableDistribution& dist);
double total_variation(const RealizableDistribution& a, const RealizableDistribution& b);

// Inverse-CDF sampler; one per worker.
class Sampler {
 public:
  explicit Sampler(const RealizableDistribution& dist);
  // n i.i.d. draws from a 64-bit Mersenne Twister seeded with `seed`.
  Sample draw(std::size_t n, std::uint64_t seed) const;

 private:
  std::vector<LabeledPoint> support_;
  std::vector<double> cumulative_;
};

Sample draw_sample(const RealizableDistribution& dist, std::size_t n, std::uint64_t seed);

// Uniform over every domain point, labeled by `target`.
RealizableDistribution uniform_target_dist(const Domain& domain, const BitVector& target);

// Mass 2^-(k+1) on (x_{y<=k}, y_{k+1}) for k < d-1 and 2^-(d-1) on the
// deepest node, d = |y| <= tree depth.
RealizableDistribution littlestone_adversary_dist(const Generator& gen, const LittlestoneTree& tree,
                                                  std::span<const Label> y);

// Spreads p_{k_i} / k_i over the k_i points of the depth-(k_i - 1) node on
// the branch y_1, y_2, ... (|y_j| = j). ConstructionError when the tree or
// the branch is shallower than k_{i_max}.
RealizableDistribution vcl_adversary_dist(const Generator& gen, const VclTree& tree, std::span<const BitVector> y,
                                          const SlowRateSchedule& schedule);

// The VCL tree formed by the nodes of a tree-structured class.
VclTree tree_structured_vcl_tree(const TreeStructured& cls);

struct LowerBoundPair {
  RealizableDistribution p0;
  RealizableDistribution p1;
  std::size_t h1, h2;  // row indices, h1 < h2
  Point x, x_prime;
  Label y;
};

// First pair of rows h1 < h2 agreeing at some point x and disagreeing at
// some x'; P_i puts 1/2 on (x, y) and 1/2 on (x', i).
LowerBoundPair exp_lower_bound_pair(const ConceptClass& cls);

// The class with the scheduled blocks followed by one block of size 2 that
// no atom touches, so some hypothesis labels the whole support 0.
ErmFailureClass erm_failure_class(const ErmSchedule& schedule);
// Every point of block t has mass 2^(-i_t) p_t with label 0; x' carries
// the remaining 1 - Σ p_t.
RealizableDistribution erm_failure_dist(const ErmFailureClass& cls, const ErmSchedule& schedule);

}  // namespace ulearn

#endif  // ULEARN_DISTRIBUTIONS_HPP_
