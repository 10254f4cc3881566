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

#include "ulearn/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "ulearn/errors.hpp"

namespace ulearn {

// ------------------------------------------------------------ distribution

RealizableDistribution::RealizableDistribution(Domain domain, std::vector<Atom> atoms, BitVector certificate,
                                               std::string name, std::optional<std::vector<Rational>> exact)
    : domain_(std::move(domain)), certificate_(std::move(certificate)), name_(std::move(name)) {
  if (exact && exact->size() != atoms.size()) throw UsageError("exact masses must match the atoms");
  if (certificate_.size() != domain_.size()) throw DomainError("certificate has the wrong width");
  // Merge repeated (point, label) atoms keeping first-occurrence order.
  std::map<std::pair<Point, Label>, std::size_t> where;
  std::vector<Rational> merged_exact;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    domain_.check(a.point);
    if (!(a.prob > 0.0)) throw ConstructionError("atom masses must be positive");
    auto [it, fresh] = where.emplace(std::make_pair(a.point, a.label), atoms_.size());
    if (fresh) {
      atoms_.push_back(a);
      if (exact) merged_exact.push_back((*exact)[i]);
    } else {
      atoms_[it->second].prob += a.prob;
      if (exact) merged_exact[it->second] += (*exact)[i];
    }
  }
  if (atoms_.empty()) throw ConstructionError("distribution needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.prob;
  if (std::fabs(total - 1.0) > 1e-12) throw ConstructionError("masses sum to " + std::to_string(total));
  if (exact) {
    Rational sum = 0;
    for (const Rational& r : merged_exact) sum += r;
    if (!(sum == Rational(1))) throw ConstructionError("exact masses do not sum to 1");
    exact_ = std::move(merged_exact);
  }
  if (!verify()) throw RealizabilityError("certificate mislabels the support of " + name_);
}

bool RealizableDistribution::verify() const {
  return std::all_of(atoms_.begin(), atoms_.end(),
                     [this](const Atom& a) { return certificate_.test(a.point) == (a.label != 0); });
}

double exact_error(const Classifier& h, const RealizableDistribution& dist) {
  if (h.domain_size() != dist.domain().size()) throw DomainError("classifier and distribution domains differ");
  double err = 0.0;
  for (const Atom& a : dist.atoms()) {
    if (h(a.point) != a.label) err += a.prob;
  }
  return std::clamp(err, 0.0, 1.0);
}

Rational exact_error_rational(const Classifier& h, const RealizableDistribution& dist) {
  if (!dist.exact_masses()) throw UsageError(dist.name() + " has no exact masses");
  if (h.domain_size() != dist.domain().size()) throw DomainError("classifier and distribution domains differ");
  Rational err = 0;
  for (std::size_t i = 0; i < dist.atoms().size(); ++i) {
    const Atom& a = dist.atoms()[i];
    if (h(a.point) != a.label) err += (*dist.exact_masses())[i];
  }
  return err;
}

double total_variation(const RealizableDistribution& a, const RealizableDistribution& b) {
  std::map<std::pair<Point, Label>, double> diff;
  for (const Atom& x : a.atoms()) diff[{x.point, x.label}] += x.prob;
  for (const Atom& x : b.atoms()) diff[{x.point, x.label}] -= x.prob;
  double tv = 0.0;
  for (const auto& [key, d] : diff) tv += std::fabs(d);
  return tv / 2.0;
}

// ----------------------------------------------------------------- sampler

Sampler::Sampler(const RealizableDistribution& dist) {
  double acc = 0.0;
  for (const Atom& a : dist.atoms()) {
    support_.push_back({a.point, a.label});
    acc += a.prob;
    cumulative_.push_back(acc);
  }
}

Sample Sampler::draw(std::size_t n, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Sample out;
  out.reserve(n);
  const double total = cumulative_.back();
  for (std::size_t i = 0; i < n; ++i) {
    // 53 random bits in [0, 1); spelled out so draws do not depend on the
    // standard library's distribution implementations.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    out.push_back(support_[static_cast<std::size_t>(it - cumulative_.begin())]);
  }
  return out;
}

Sample draw_sample(const RealizableDistribution& dist, std::size_t n, std::uint64_t seed) {
  return Sampler(dist).draw(n, seed);
}

// ----------------------------------------------------------- constructions

RealizableDistribution uniform_target_dist(const Domain& domain, const BitVector& target) {
  if (target.size() != domain.size()) throw DomainError("target has the wrong width");
  const std::size_t m = domain.size();
  std::vector<Atom> atoms;
  std::vector<Rational> exact;
  for (Point x = 0; x < m; ++x) {
    atoms.push_back({x, static_cast<Label>(target.test(x) ? 1 : 0), 1.0 / static_cast<double>(m)});
    exact.emplace_back(1, static_cast<std::int64_t>(m));
  }
  return RealizableDistribution(domain, std::move(atoms), target, "uniform_target", std::move(exact));
}

RealizableDistribution littlestone_adversary_dist(const Generator& gen, const LittlestoneTree& tree,
                                                  std::span<const Label> y) {
  const std::size_t d = y.size();
  if (d < 1) throw ConfigError("branch needs at least one label");
  if (static_cast<int>(d) > tree.depth) throw ConstructionError("branch is deeper than the tree");
  std::vector<Atom> atoms;
  std::vector<Rational> exact;
  std::vector<Constraint> constraints;
  for (std::size_t k = 0; k < d; ++k) {
    const Point x = tree.at(y.first(k));
    const Rational mass = k + 1 < d ? Rational(1, HyperInt::Pow2(HyperInt(static_cast<std::int64_t>(k + 1))))
                                    : Rational(1, HyperInt::Pow2(HyperInt(static_cast<std::int64_t>(d - 1))));
    atoms.push_back({x, y[k], mass.to_double()});
    exact.push_back(mass);
    constraints.push_back({x, y[k]});
  }
  auto cert = gen.first_consistent(constraints);
  if (!cert) throw ConstructionError("no hypothesis follows the branch; not a Littlestone tree of the class");
  return RealizableDistribution(gen.domain(), std::move(atoms), *cert, "littlestone_adversary", std::move(exact));
}

RealizableDistribution vcl_adversary_dist(const Generator& gen, const VclTree& tree, std::span<const BitVector> y,
                                          const SlowRateSchedule& schedule) {
  const HyperInt& k_max = schedule.k.back();
  if (!k_max.is_small() || k_max.to_int64() > tree.depth) {
    throw ConstructionError("VCL tree of depth " + std::to_string(tree.depth) + " is shallower than k_imax = " +
                            k_max.to_string());
  }
  if (HyperInt(static_cast<std::int64_t>(y.size())) < k_max) throw ConstructionError("branch is shorter than k_imax");
  std::vector<Atom> atoms;
  std::vector<Rational> exact;
  std::vector<Constraint> constraints;
  for (std::size_t i = 0; i < schedule.k.size(); ++i) {
    const auto k = static_cast<std::size_t>(schedule.k[i].to_int64());
    const VclTree::Node& node = tree.nodes[tree.node_at(y.first(k - 1))];
    const BitVector& pattern = y[k - 1];
    if (node.tuple.size() != k || pattern.size() != k) throw ConstructionError("node width differs from its depth");
    const Rational mass = schedule.p[i] * Rational(1, static_cast<std::int64_t>(k));
    for (std::size_t j = 0; j < k; ++j) {
      const Label lab = pattern.test(j) ? 1 : 0;
      atoms.push_back({node.tuple[j], lab, mass.to_double()});
      exact.push_back(mass);
      constraints.push_back({node.tuple[j], lab});
    }
  }
  auto cert = gen.first_consistent(constraints);
  if (!cert) throw ConstructionError("no hypothesis follows the branch; not a VCL tree of the class");
  return RealizableDistribution(gen.domain(), std::move(atoms), *cert, "vcl_adversary", std::move(exact));
}

VclTree tree_structured_vcl_tree(const TreeStructured& cls) {
  VclTree tree;
  tree.depth = static_cast<int>(cls.depth());
  tree.nodes.resize(cls.node_count());
  for (std::size_t node = 0; node < cls.node_count(); ++node) {
    const std::size_t k = cls.node_depth(node);
    for (std::size_t i = 0; i <= k; ++i) tree.nodes[node].tuple.push_back(cls.node_point(node, i));
    if (k + 1 < cls.depth()) tree.nodes[node].first_child = cls.child(node, 0);
  }
  return tree;
}

LowerBoundPair exp_lower_bound_pair(const ConceptClass& cls) {
  if (cls.size() < 3) throw ConstructionError("the lower-bound pair needs at least three hypotheses");
  const std::size_t m = cls.domain().size();
  for (std::size_t h1 = 0; h1 < cls.size(); ++h1) {
    for (std::size_t h2 = h1 + 1; h2 < cls.size(); ++h2) {
      const BitVector& a = cls.row(h1);
      const BitVector& b = cls.row(h2);
      std::optional<Point> agree, differ;
      for (Point x = 0; x < m; ++x) {
        if (a.test(x) == b.test(x)) {
          if (!agree) agree = x;
        } else if (!differ) {
          differ = x;
        }
      }
      if (!agree || !differ) continue;
      const Label y = a.test(*agree) ? 1 : 0;
      auto make = [&](Label i) {
        const BitVector& cert = (a.test(*differ) ? 1 : 0) == i ? a : b;
        return RealizableDistribution(cls.domain(), {{*agree, y, 0.5}, {*differ, i, 0.5}}, cert,
                                      "lower_bound_p" + std::to_string(i),
                                      std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
      };
      return LowerBoundPair{make(0), make(1), h1, h2, *agree, *differ, y};
    }
  }
  throw ConstructionError("no two hypotheses both agree and disagree somewhere");
}

ErmFailureClass erm_failure_class(const ErmSchedule& schedule) {
  std::vector<unsigned> exponents = schedule.exponents;
  exponents.push_back(1);
  return ErmFailureClass(std::move(exponents));
}

RealizableDistribution erm_failure_dist(const ErmFailureClass& cls, const ErmSchedule& schedule) {
  if (cls.block_count() < schedule.exponents.size()) throw ConstructionError("class has fewer blocks than the schedule");
  std::vector<Atom> atoms;
  std::vector<Rational> exact;
  std::vector<Constraint> constraints;
  Rational used = 0;
  for (std::size_t t = 0; t < schedule.exponents.size(); ++t) {
    if (cls.exponents()[t] != schedule.exponents[t]) throw ConstructionError("class blocks differ from the schedule");
    const std::size_t size = cls.block_size(t);
    const Rational mass = schedule.p[t] * Rational(1, static_cast<std::int64_t>(size));
    for (std::size_t j = 0; j < size; ++j) {
      const Point x = cls.block_start(t) + static_cast<Point>(j);
      atoms.push_back({x, 0, mass.to_double()});
      exact.push_back(mass);
      constraints.push_back({x, 0});
    }
    used += schedule.p[t];
  }
  const Rational rest = Rational(1) - used;
  if (rest.sign() < 0) throw ConstructionError("block masses exceed 1");
  if (rest.sign() > 0) {
    atoms.push_back({cls.extra_point(), 0, rest.to_double()});
    exact.push_back(rest);
    constraints.push_back({cls.extra_point(), 0});
  }
  auto cert = cls.first_consistent(constraints);
  if (!cert) throw ConstructionError("no hypothesis is zero on the support; add an unused block");
  return RealizableDistribution(cls.domain(), std::move(atoms), *cert, "erm_failure", std::move(exact));
}

}  // namespace ulearn
