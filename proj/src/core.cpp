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

#include "ulearn/core.hpp"

#include <algorithm>
#include <unordered_set>

#include "ulearn/errors.hpp"

namespace ulearn {

Domain::Domain(std::size_t size) {
  names_.reserve(size);
  for (std::size_t i = 0; i < size; ++i) names_.push_back(std::to_string(i));
  for (std::size_t i = 0; i < size; ++i) index_.emplace(names_[i], static_cast<Point>(i));
}

Domain::Domain(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], static_cast<Point>(i)).second) {
      throw ConstructionError("duplicate point name '" + names_[i] + "'");
    }
  }
}

std::optional<Point> Domain::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Domain::check(Point p) const {
  if (!contains(p)) {
    throw DomainError("point id " + std::to_string(p) + " outside domain of size " +
                      std::to_string(size()));
  }
}

ConceptClass::ConceptClass(Domain domain, const std::vector<BitVector>& rows)
    : domain_(std::move(domain)) {
  std::unordered_set<BitVector, BitVectorHash> seen;
  for (const BitVector& r : rows) {
    if (r.size() != domain_.size()) {
      throw ConstructionError("hypothesis row of length " + std::to_string(r.size()) +
                              " over a domain of size " + std::to_string(domain_.size()));
    }
    if (seen.insert(r).second) rows_.push_back(r);
  }
  columns_.assign(domain_.size(), BitVector(rows_.size()));
  for (std::size_t h = 0; h < rows_.size(); ++h) {
    for (std::size_t x = rows_[h].find_first(); x != BitVector::npos; x = rows_[h].find_next(x + 1)) {
      columns_[x].set(h);
    }
  }
}

ConceptClass ConceptClass::FromStrings(const std::vector<std::string>& rows, std::size_t domain_size) {
  if (domain_size == 0 && !rows.empty()) domain_size = rows.front().size();
  std::vector<BitVector> bits;
  bits.reserve(rows.size());
  for (const std::string& r : rows) bits.push_back(BitVector::FromString(r));
  return ConceptClass(Domain(domain_size), bits);
}

BitVector ConceptClass::consistent(const BitVector& members, Point x, Label y) const {
  BitVector r = members;
  if (y) {
    r &= columns_[x];
  } else {
    r.subtract(columns_[x]);
  }
  return r;
}

BitVector ConceptClass::consistent(std::span<const Constraint> constraints) const {
  BitVector r = all();
  for (const Constraint& c : constraints) {
    domain_.check(c.point);
    r = consistent(r, c.point, c.label);
  }
  return r;
}

ConceptClass ConceptClass::subclass(const BitVector& members) const {
  std::vector<BitVector> rows;
  for (std::size_t h = members.find_first(); h != BitVector::npos; h = members.find_next(h + 1)) {
    rows.push_back(rows_[h]);
  }
  return ConceptClass(domain_, rows);
}

PatternSet::PatternSet(std::size_t arity, std::vector<BitVector> patterns)
    : arity_(arity), patterns_(std::move(patterns)) {
  for (const BitVector& p : patterns_) {
    if (p.size() != arity_) throw ConstructionError("pattern arity mismatch");
  }
  std::sort(patterns_.begin(), patterns_.end());
  patterns_.erase(std::unique(patterns_.begin(), patterns_.end()), patterns_.end());
}

std::size_t PatternSet::index_of(const BitVector& p) const {
  auto it = std::lower_bound(patterns_.begin(), patterns_.end(), p);
  if (it == patterns_.end() || !(*it == p)) return BitVector::npos;
  return static_cast<std::size_t>(it - patterns_.begin());
}

bool PatternSet::contains(const BitVector& p) const { return index_of(p) != BitVector::npos; }

ConceptClass PatternSet::as_class() const { return ConceptClass(Domain(arity_), patterns_); }

ConceptClass restrict(const ConceptClass& cls, std::span<const Constraint> constraints) {
  return cls.subclass(cls.consistent(constraints));
}

PatternSet project(const ConceptClass& cls, std::span<const Point> points) {
  if (points.empty()) throw UsageError("project needs a nonempty tuple");
  for (Point p : points) cls.domain().check(p);
  std::vector<BitVector> out;
  out.reserve(cls.size());
  for (const BitVector& row : cls.rows()) {
    BitVector pat(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) pat.set(i, row.test(points[i]));
    out.push_back(std::move(pat));
  }
  return PatternSet(points.size(), std::move(out));
}

namespace {

// Depth-first search over increasing point sets; `cells` partitions the
// class by the labels on the chosen points, and a set is shattered iff
// every cell is nonempty.
class ShatterSearch {
 public:
  ShatterSearch(const ConceptClass& cls, int cap) : cls_(cls), cap_(cap) {}

  int Run() {
    if (cls_.empty()) return 0;
    std::vector<BitVector> cells{cls_.all()};
    Extend(cells, 0, 0);
    return best_;
  }

 private:
  void Extend(const std::vector<BitVector>& cells, std::size_t from, int depth) {
    best_ = std::max(best_, depth);
    if (best_ >= cap_) return;
    const std::size_t n = cls_.domain().size();
    // Not enough points or hypotheses left to beat the incumbent.
    if (depth + static_cast<int>(n - from) <= best_) return;
    if (depth + 1 < 63 && cls_.size() < (std::size_t{1} << (best_ + 1))) return;
    std::vector<BitVector> next;
    for (std::size_t x = from; x < n && best_ < cap_; ++x) {
      next.clear();
      bool ok = true;
      for (const BitVector& c : cells) {
        BitVector one = c & cls_.ones(static_cast<Point>(x));
        BitVector zero = c;
        zero.subtract(one);
        if (one.none() || zero.none()) {
          ok = false;
          break;
        }
        next.push_back(std::move(zero));
        next.push_back(std::move(one));
      }
      if (ok) Extend(next, x + 1, depth + 1);
    }
  }

  const ConceptClass& cls_;
  int cap_;
  int best_ = 0;
};

}  // namespace

Capped vc_dimension(const ConceptClass& cls, int cap) {
  if (cap < 0) throw UsageError("cap must be nonnegative");
  const int d = ShatterSearch(cls, cap).Run();
  if (d < cap) return {d, false};
  // d == cap: exact only if no larger set could possibly be shattered.
  const bool exact = static_cast<std::size_t>(cap) >= cls.domain().size() ||
                     (cap + 1 < 63 && cls.size() < (std::size_t{1} << (cap + 1)));
  return {cap, !exact};
}

}  // namespace ulearn
