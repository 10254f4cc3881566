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

#include "ulearn/generators.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "ulearn/errors.hpp"

namespace ulearn {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kExponential:
      return "exponential";
    case Verdict::kLinear:
      return "linear";
    case Verdict::kArbitrarilySlow:
      return "arbitrarily_slow";
  }
  return "unknown";
}

namespace {

// Collapses constraints to one label per point; nullopt on a contradiction.
std::optional<std::map<Point, Label>> Collapse(std::span<const Constraint> constraints) {
  std::map<Point, Label> out;
  for (const Constraint& c : constraints) {
    auto [it, inserted] = out.emplace(c.point, c.label);
    if (!inserted && it->second != c.label) return std::nullopt;
  }
  return out;
}

std::vector<std::string> NumberNames(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= m; ++i) names.push_back(std::to_string(i));
  return names;
}

bool Agrees(const BitVector& row, std::span<const Constraint> constraints) {
  for (const Constraint& c : constraints) {
    if (row.test(c.point) != (c.label != 0)) return false;
  }
  return true;
}

}  // namespace

bool Generator::expandable() const {
  auto c = cardinality();
  return c.has_value() && *c <= kExpandLimit;
}

void Generator::CheckPoints(std::span<const Constraint> constraints) const {
  for (const Constraint& c : constraints) domain().check(c.point);
}

PatternSet Generator::project(std::span<const Point> points) const {
  if (points.empty()) throw UsageError("project needs a nonempty tuple");
  for (Point p : points) domain().check(p);
  if (expandable()) return ulearn::project(expand(), points);
  if (points.size() > 20) throw BudgetError("projection onto more than 20 points of an unexpandable class");
  std::vector<BitVector> out;
  std::vector<Constraint> cs(points.size());
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << points.size()); ++code) {
    BitVector pat(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const bool bit = (code >> i) & 1U;
      pat.set(i, bit);
      cs[i] = {points[i], static_cast<Label>(bit)};
    }
    if (consistent(cs)) out.push_back(std::move(pat));
  }
  return PatternSet(points.size(), std::move(out));
}

std::shared_ptr<const ConceptClass> expand_shared(const Generator& g) {
  return std::make_shared<const ConceptClass>(g.expand());
}

// ---------------------------------------------------------------- explicit

bool ExplicitClass::consistent(std::span<const Constraint> constraints) const {
  return cls_.consistent(constraints).any();
}

std::optional<BitVector> ExplicitClass::first_consistent(std::span<const Constraint> constraints) const {
  const BitVector members = cls_.consistent(constraints);
  const std::size_t h = members.find_first();
  if (h == BitVector::npos) return std::nullopt;
  return cls_.row(h);
}

PatternSet ExplicitClass::project(std::span<const Point> points) const {
  return ulearn::project(cls_, points);
}

// -------------------------------------------------------------- thresholds

Thresholds::Thresholds(std::size_t m) : domain_(NumberNames(m)) {
  if (m == 0) throw ConstructionError("thresholds need M >= 1");
}

Thresholds Thresholds::Dyadic(std::size_t levels) {
  if (levels > 16) throw ConstructionError("dyadic grid deeper than 16 levels");
  const std::size_t m = std::size_t{1} << levels;
  std::vector<std::string> names;
  for (std::size_t j = 1; j <= m; ++j) {
    std::ostringstream os;
    os.precision(17);
    os << static_cast<double>(j) / static_cast<double>(m);
    names.push_back(os.str());
  }
  return Thresholds(Domain(std::move(names)), true);
}

ConceptClass Thresholds::expand() const {
  const std::size_t m = domain_.size();
  std::vector<BitVector> rows;
  for (std::size_t j = 0; j < m; ++j) {
    BitVector r(m);
    for (std::size_t p = j; p < m; ++p) r.set(p);
    rows.push_back(std::move(r));
  }
  return ConceptClass(domain_, rows);
}

// h_j(p) = 1{p >= j}, j = 0..M-1.
std::pair<std::size_t, std::size_t> Thresholds::Window(std::span<const Constraint> constraints) const {
  CheckPoints(constraints);
  std::size_t lo = 0;
  std::size_t hi = domain_.size() - 1;
  for (const Constraint& c : constraints) {
    if (c.label) {
      hi = std::min<std::size_t>(hi, c.point);
    } else {
      lo = std::max<std::size_t>(lo, c.point + 1);
    }
  }
  return {lo, hi};
}

bool Thresholds::consistent(std::span<const Constraint> constraints) const {
  auto [lo, hi] = Window(constraints);
  return lo <= hi;
}

std::optional<BitVector> Thresholds::first_consistent(std::span<const Constraint> constraints) const {
  auto [lo, hi] = Window(constraints);
  if (lo > hi) return std::nullopt;
  BitVector r(domain_.size());
  for (std::size_t p = lo; p < domain_.size(); ++p) r.set(p);
  return r;
}

PatternSet Thresholds::project(std::span<const Point> points) const {
  if (points.empty()) throw UsageError("project needs a nonempty tuple");
  for (Point p : points) domain_.check(p);
  // Distinct patterns come from the first threshold and those just past
  // a tuple point.
  std::set<std::size_t> cuts{0};
  for (Point p : points) {
    if (p + 1 < domain_.size()) cuts.insert(p + 1);
  }
  std::vector<BitVector> out;
  for (std::size_t j : cuts) {
    BitVector pat(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) pat.set(i, points[i] >= j);
    out.push_back(std::move(pat));
  }
  return PatternSet(points.size(), std::move(out));
}

std::optional<Verdict> Thresholds::structural_verdict() const {
  return dyadic_ ? Verdict::kLinear : Verdict::kExponential;
}

std::string Thresholds::structural_reason() const {
  if (dyadic_) {
    return "thresholds on the reals have an infinite Littlestone tree (binary search on the line) "
           "but VC dimension 1, so no infinite VCL tree";
  }
  return "thresholds on the naturals have no infinite Littlestone tree: once a point x is "
         "labeled 1 only the finitely many thresholds t <= x remain";
}

// ---------------------------------------------------------- half intervals

HalfIntervals::HalfIntervals(std::size_t m) : domain_(NumberNames(m)) {
  if (m == 0) throw ConstructionError("half intervals need M >= 1");
}

ConceptClass HalfIntervals::expand() const {
  const std::size_t m = domain_.size();
  std::vector<BitVector> rows;
  for (std::size_t j = 0; j < m; ++j) {
    BitVector r(m);
    for (std::size_t p = 0; p <= j; ++p) r.set(p);
    rows.push_back(std::move(r));
  }
  return ConceptClass(domain_, rows);
}

// h_j(p) = 1{p <= j}.
bool HalfIntervals::consistent(std::span<const Constraint> constraints) const {
  return first_consistent(constraints).has_value();
}

std::optional<BitVector> HalfIntervals::first_consistent(std::span<const Constraint> constraints) const {
  CheckPoints(constraints);
  std::size_t lo = 0;
  std::size_t hi = domain_.size() - 1;
  for (const Constraint& c : constraints) {
    if (c.label) {
      lo = std::max<std::size_t>(lo, c.point);
    } else {
      if (c.point == 0) return std::nullopt;
      hi = std::min<std::size_t>(hi, c.point - 1);
    }
  }
  if (lo > hi) return std::nullopt;
  BitVector r(domain_.size());
  for (std::size_t p = 0; p <= lo; ++p) r.set(p);
  return r;
}

std::string HalfIntervals::structural_reason() const {
  return "after any point is labeled 0 only finitely many intervals remain, so no infinite "
         "Littlestone tree exists";
}

// -------------------------------------------------------------- singletons

Singletons::Singletons(std::size_t m) : domain_(NumberNames(m)) {
  if (m == 0) throw ConstructionError("singletons need M >= 1");
}

ConceptClass Singletons::expand() const {
  const std::size_t m = domain_.size();
  std::vector<BitVector> rows;
  for (std::size_t j = 0; j < m; ++j) {
    BitVector r(m);
    r.set(j);
    rows.push_back(std::move(r));
  }
  return ConceptClass(domain_, rows);
}

bool Singletons::consistent(std::span<const Constraint> constraints) const {
  return first_consistent(constraints).has_value();
}

std::optional<BitVector> Singletons::first_consistent(std::span<const Constraint> constraints) const {
  CheckPoints(constraints);
  auto labels = Collapse(constraints);
  if (!labels) return std::nullopt;
  std::optional<Point> one;
  for (auto [p, y] : *labels) {
    if (!y) continue;
    if (one) return std::nullopt;
    one = p;
  }
  if (!one) {
    for (Point p = 0; p < domain_.size(); ++p) {
      if (!labels->count(p)) {
        one = p;
        break;
      }
    }
    if (!one) return std::nullopt;
  }
  BitVector r(domain_.size());
  r.set(*one);
  return r;
}

std::string Singletons::structural_reason() const {
  return "Littlestone dimension 1";
}

// -------------------------------------------------------------- full class

FullClass::FullClass(std::size_t m) : domain_(NumberNames(m)) {
  if (m == 0) throw ConstructionError("full class needs M >= 1");
}

std::optional<std::uint64_t> FullClass::cardinality() const {
  if (domain_.size() >= 64) return std::nullopt;
  return std::uint64_t{1} << domain_.size();
}

ConceptClass FullClass::expand() const {
  if (!expandable()) throw BudgetError("full class too large to expand");
  const std::size_t m = domain_.size();
  std::vector<BitVector> rows;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
    BitVector r(m);
    for (std::size_t p = 0; p < m; ++p) r.set(p, (code >> p) & 1U);
    rows.push_back(std::move(r));
  }
  return ConceptClass(domain_, rows);
}

bool FullClass::consistent(std::span<const Constraint> constraints) const {
  CheckPoints(constraints);
  return Collapse(constraints).has_value();
}

std::optional<BitVector> FullClass::first_consistent(std::span<const Constraint> constraints) const {
  CheckPoints(constraints);
  auto labels = Collapse(constraints);
  if (!labels) return std::nullopt;
  BitVector r(domain_.size());
  for (auto [p, y] : *labels) r.set(p, y != 0);
  return r;
}

PatternSet FullClass::project(std::span<const Point> points) const {
  if (points.empty()) throw UsageError("project needs a nonempty tuple");
  for (Point p : points) domain_.check(p);
  std::vector<Point> distinct(points.begin(), points.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() > 20) throw BudgetError("projection onto more than 20 distinct points");
  std::vector<BitVector> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << distinct.size()); ++code) {
    BitVector pat(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto k = std::lower_bound(distinct.begin(), distinct.end(), points[i]) - distinct.begin();
      pat.set(i, (code >> k) & 1U);
    }
    out.push_back(std::move(pat));
  }
  return PatternSet(points.size(), std::move(out));
}

std::string FullClass::structural_reason() const {
  return "all functions on an infinite domain shatter every finite set, giving an infinite "
         "VCL tree";
}

// -------------------------------------------------------- disjoint powerset

DisjointPowerset::DisjointPowerset(std::size_t blocks) : blocks_(blocks), domain_(1) {
  if (blocks == 0 || blocks > 40) throw ConstructionError("disjoint powerset needs 1..40 blocks");
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= blocks; ++k) {
    for (std::size_t i = 0; i < k; ++i) {
      names.push_back(std::to_string(k) + "." + std::to_string(i));
      block_of_.push_back(k);
    }
  }
  domain_ = Domain(std::move(names));
}

std::optional<std::uint64_t> DisjointPowerset::cardinality() const {
  std::uint64_t total = 1;
  for (std::size_t k = 1; k <= blocks_; ++k) total += (std::uint64_t{1} << k) - 1;
  return total;
}

ConceptClass DisjointPowerset::expand() const {
  if (!expandable()) throw BudgetError("disjoint powerset too large to expand");
  const std::size_t m = domain_.size();
  std::vector<BitVector> rows{BitVector(m)};
  for (std::size_t k = 1; k <= blocks_; ++k) {
    for (std::uint64_t code = 1; code < (std::uint64_t{1} << k); ++code) {
      BitVector r(m);
      for (std::size_t i = 0; i < k; ++i) r.set(block_start(k) + i, (code >> i) & 1U);
      rows.push_back(std::move(r));
    }
  }
  return ConceptClass(domain_, rows);
}

bool DisjointPowerset::consistent(std::span<const Constraint> constraints) const {
  return first_consistent(constraints).has_value();
}

std::optional<BitVector> DisjointPowerset::first_consistent(std::span<const Constraint> constraints) const {
  CheckPoints(constraints);
  auto labels = Collapse(constraints);
  if (!labels) return std::nullopt;
  BitVector r(domain_.size());
  std::size_t block = 0;
  for (auto [p, y] : *labels) {
    if (!y) continue;
    if (block != 0 && block_of_[p] != block) return std::nullopt;
    block = block_of_[p];
    r.set(p);
  }
  return r;
}

PatternSet DisjointPowerset::project(std::span<const Point> points) const {
  if (points.empty()) throw UsageError("project needs a nonempty tuple");
  for (Point p : points) domain_.check(p);
  std::vector<BitVector> out{BitVector(points.size())};
  std::map<std::size_t, std::vector<Point>> by_block;
  for (Point p : points) by_block[block_of_[p]].push_back(p);
  for (auto& [k, pts] : by_block) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (std::uint64_t code = 1; code < (std::uint64_t{1} << pts.size()); ++code) {
      BitVector pat(points.size());
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (block_of_[points[i]] != k) continue;
        const auto j = std::lower_bound(pts.begin(), pts.end(), points[i]) - pts.begin();
        pat.set(i, (code >> j) & 1U);
      }
      out.push_back(std::move(pat));
    }
  }
  return PatternSet(points.size(), std::move(out));
}

std::string DisjointPowerset::structural_reason() const {
  return "block k has Littlestone dimension k, so the dimension is unbounded, but a tree "
         "must commit to one block after its first 1 label, so no infinite Littlestone tree exists";
}

// --------------------------------------------------------------- erm failure

namespace {

std::uint64_t Binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (static_cast<unsigned __int128>(1) << 63)) return std::uint64_t{1} << 63;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

ErmFailureClass::ErmFailureClass(std::vector<unsigned> exponents)
    : exponents_(std::move(exponents)), domain_(1) {
  if (exponents_.empty()) throw ConstructionError("erm_failure needs at least one block");
  std::vector<std::string> names;
  Point next = 0;
  std::set<unsigned> seen;
  for (unsigned e : exponents_) {
    if (e == 0 || e > 24) throw ConstructionError("erm_failure block exponents must lie in 1..24");
    if (!seen.insert(e).second) throw ConstructionError("erm_failure block exponents must be distinct");
    starts_.push_back(next);
    for (std::size_t j = 0; j < (std::size_t{1} << e); ++j) {
      names.push_back("b" + std::to_string(e) + "." + std::to_string(j));
    }
    next += static_cast<Point>(std::size_t{1} << e);
  }
  names.push_back("x'");
  domain_ = Domain(std::move(names));
}

std::optional<std::size_t> ErmFailureClass::block_of(Point p) const {
  for (std::size_t b = 0; b < starts_.size(); ++b) {
    if (p >= starts_[b] && p < starts_[b] + block_size(b)) return b;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> ErmFailureClass::cardinality() const {
  std::uint64_t total = 0;
  for (unsigned e : exponents_) {
    const std::uint64_t n = std::uint64_t{1} << e;
    for (std::uint64_t j = n / 2; j <= n; ++j) {
      const std::uint64_t c = Binomial(n, j);
      if (c >= (std::uint64_t{1} << 62) || total >= (std::uint64_t{1} << 62)) return std::nullopt;
      total += c;
    }
  }
  return total;
}

bool ErmFailureClass::expandable() const {
  // Subsets are enumerated by code, so every block must fit in 20 bits.
  for (unsigned e : exponents_) {
    if (e > 4) return false;
  }
  return Generator::expandable();
}

BitVector ErmFailureClass::indicator(std::span<const Point> members) const {
  BitVector r(domain_.size());
  for (Point p : members) r.set(p);
  return r;
}

ConceptClass ErmFailureClass::expand() const {
  if (!expandable()) throw BudgetError("erm_failure class too large to expand");
  std::vector<BitVector> rows;
  for (std::size_t b = 0; b < exponents_.size(); ++b) {
    const std::size_t n = block_size(b);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
      if (static_cast<std::size_t>(std::popcount(code)) < n / 2) continue;
      BitVector r(domain_.size());
      for (std::size_t i = 0; i < n; ++i) r.set(starts_[b] + i, (code >> i) & 1U);
      rows.push_back(std::move(r));
    }
  }
  return ConceptClass(domain_, rows);
}

bool ErmFailureClass::consistent(std::span<const Constraint> constraints) const {
  return first_consistent(constraints).has_value();
}

std::optional<BitVector> ErmFailureClass::first_consistent(std::span<const Constraint> constraints) const {
  CheckPoints(constraints);
  auto labels = Collapse(constraints);
  if (!labels) return std::nullopt;
  std::optional<std::size_t> one_block;
  for (auto [p, y] : *labels) {
    if (!y) continue;
    auto b = block_of(p);
    if (!b || (one_block && *one_block != *b)) return std::nullopt;
    one_block = b;
  }
  for (std::size_t b = 0; b < exponents_.size(); ++b) {
    if (one_block && *one_block != b) continue;
    const std::size_t n = block_size(b);
    BitVector r(domain_.size());
    std::size_t have = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto it = labels->find(starts_[b] + static_cast<Point>(i));
      if (it != labels->end() && it->second) {
        r.set(starts_[b] + i);
        ++have;
      }
    }
    // Fill the lowest free points until |I| reaches half the block.
    for (std::size_t i = 0; i < n && have < n / 2; ++i) {
      const Point p = starts_[b] + static_cast<Point>(i);
      if (r.test(p) || labels->count(p)) continue;
      r.set(p);
      ++have;
    }
    if (have >= n / 2) return r;
  }
  return std::nullopt;
}

std::string ErmFailureClass::structural_reason() const {
  return "the union of the block classes has no infinite Littlestone tree (a tree must commit to "
         "one block after its first 1 label), although a badly chosen ERM is arbitrarily slow";
}

// ------------------------------------------------------------ tree structured

TreeStructured::TreeStructured(std::size_t depth) : depth_(depth), domain_(1) {
  if (depth == 0 || depth > 6) throw ConstructionError("tree_structured depth must lie in 1..6");
  std::vector<std::string> names;
  std::size_t level_begin = 0;
  std::size_t level_count = 1;
  for (std::size_t k = 0; k < depth; ++k) {
    const std::size_t level_end = level_begin + level_count;
    for (std::size_t node = level_begin; node < level_end; ++node) {
      node_depth_.push_back(k);
      node_first_.push_back(static_cast<Point>(names.size()));
      for (std::size_t i = 0; i <= k; ++i) {
        names.push_back("n" + std::to_string(node) + "." + std::to_string(i));
        point_node_.push_back(node);
      }
    }
    // Children of this level occupy the next level in order.
    for (std::size_t node = level_begin; node < level_end; ++node) {
      node_child_.push_back(level_end + (node - level_begin) * (std::size_t{1} << (k + 1)));
    }
    level_begin = level_end;
    level_count <<= (k + 1);
  }
  domain_ = Domain(std::move(names));
}

std::optional<std::uint64_t> TreeStructured::cardinality() const {
  const std::size_t bits = depth_ * (depth_ + 1) / 2;
  if (bits >= 63) return std::nullopt;
  return std::uint64_t{1} << bits;
}

struct TreeStructured::Search {
  const TreeStructured& t;
  const std::map<Point, Label>& labels;
  std::vector<std::size_t> ones;  // nodes carrying a 1 label
  std::vector<std::size_t> parent;
  BitVector row;

  std::size_t AncestorAtDepth(std::size_t node, std::size_t k) const {
    while (t.node_depth_[node] > k) node = parent[node];
    return node;
  }

  bool Visit(std::size_t node) {
    const std::size_t k = t.node_depth_[node];
    const std::size_t width = k + 1;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << width); ++code) {
      bool ok = true;
      for (std::size_t i = 0; i < width && ok; ++i) {
        auto it = labels.find(t.node_point(node, i));
        const bool bit = (code >> (width - 1 - i)) & 1U;
        if (it != labels.end() && (it->second != 0) != bit) ok = false;
      }
      if (!ok) continue;
      if (k + 1 < t.depth_) {
        const std::size_t c = t.child(node, code);
        for (std::size_t v : ones) {
          if (t.node_depth_[v] > k && AncestorAtDepth(v, k + 1) != c) ok = false;
        }
        if (!ok) continue;
        if (!Visit(c)) continue;
      }
      for (std::size_t i = 0; i < width; ++i) row.set(t.node_point(node, i), (code >> (width - 1 - i)) & 1U);
      return true;
    }
    return false;
  }
};

std::optional<BitVector> TreeStructured::first_consistent(std::span<const Constraint> constraints) const {
  CheckPoints(constraints);
  auto labels = Collapse(constraints);
  if (!labels) return std::nullopt;
  Search s{*this, *labels, {}, std::vector<std::size_t>(node_count(), 0), BitVector(domain_.size())};
  for (std::size_t node = 0; node < node_count(); ++node) {
    if (node_depth_[node] + 1 < depth_) {
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << (node_depth_[node] + 1)); ++code) {
        s.parent[child(node, code)] = node;
      }
    }
  }
  for (auto [p, y] : *labels) {
    if (y) s.ones.push_back(point_node_[p]);
  }
  // 1 labels off a single root path can never be realized together.
  for (std::size_t a : s.ones) {
    for (std::size_t b : s.ones) {
      const std::size_t lo = std::min(node_depth_[a], node_depth_[b]);
      if (s.AncestorAtDepth(a, lo) != s.AncestorAtDepth(b, lo)) return std::nullopt;
    }
  }
  if (!s.Visit(0)) return std::nullopt;
  return s.row;
}

bool TreeStructured::consistent(std::span<const Constraint> constraints) const {
  return first_consistent(constraints).has_value();
}

ConceptClass TreeStructured::expand() const {
  if (!expandable()) throw BudgetError("tree_structured class too large to expand");
  std::vector<BitVector> rows;
  BitVector row(domain_.size());
  // Depth-first over branches in child order.
  auto rec = [&](auto&& self, std::size_t node) -> void {
    const std::size_t k = node_depth_[node];
    const std::size_t width = k + 1;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << width); ++code) {
      for (std::size_t i = 0; i < width; ++i) row.set(node_point(node, i), (code >> (width - 1 - i)) & 1U);
      if (k + 1 < depth_) {
        self(self, child(node, code));
      } else {
        rows.push_back(row);
      }
    }
    for (std::size_t i = 0; i < width; ++i) row.reset(node_point(node, i));
  };
  rec(rec, 0);
  return ConceptClass(domain_, rows);
}

std::string TreeStructured::structural_reason() const {
  return "the node tuples form an infinite VCL tree by construction, so the untruncated class "
         "requires arbitrarily slow rates";
}

}  // namespace ulearn
