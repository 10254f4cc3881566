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

#include "ulearn/trees.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <mutex>

#include "ulearn/errors.hpp"

namespace ulearn {

namespace {

int FloorLog2(std::size_t c) { return static_cast<int>(std::bit_width(c)) - 1; }

// Smallest class size that can have D(., τ) >= d: 2^(τ + (τ+1) + ... ).
// Saturates at 2^63.
std::uint64_t MinSizeForValue(std::size_t round, int d) {
  std::uint64_t exp = 0;
  for (int j = 0; j < d; ++j) exp += round + static_cast<std::uint64_t>(j);
  if (exp >= 63) return std::uint64_t{1} << 63;
  return std::uint64_t{1} << exp;
}

}  // namespace

// ------------------------------------------------------------------ trees

std::size_t LittlestoneTree::index(std::span<const Label> prefix) {
  std::size_t v = 0;
  for (Label y : prefix) v = (v << 1) | y;
  return (std::size_t{1} << prefix.size()) - 1 + v;
}

Point LittlestoneTree::at(std::span<const Label> prefix) const {
  if (static_cast<int>(prefix.size()) >= depth) throw UsageError("prefix reaches past the leaves");
  return nodes[index(prefix)];
}

std::size_t VclTree::node_at(std::span<const BitVector> path) const {
  if (static_cast<int>(path.size()) >= depth) throw UsageError("path reaches past the leaves");
  std::size_t node = 0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (path[k].size() != k + 1) throw UsageError("path pattern has the wrong width");
    node = nodes[node].first_child + pattern_code(path[k]);
  }
  return node;
}

std::uint64_t pattern_code(const BitVector& pattern) {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) code = (code << 1) | (pattern.test(i) ? 1U : 0U);
  return code;
}

BitVector code_pattern(std::uint64_t code, std::size_t width) {
  BitVector p(width);
  for (std::size_t i = 0; i < width; ++i) p.set(i, (code >> (width - 1 - i)) & 1U);
  return p;
}

// ------------------------------------------------------------------ solver

GameSolver::GameSolver(std::shared_ptr<const ConceptClass> cls, SearchBudget budget)
    : cls_(std::move(cls)), budget_(budget) {
  if (!cls_) throw UsageError("solver needs a class");
}

std::size_t GameSolver::memo_size() const {
  std::shared_lock lock(mu_);
  return ld_memo_.size() + vcl_memo_.size();
}

int GameSolver::littlestone(const BitVector& members) const {
  if (members.size() != cls_->size()) throw UsageError("member set over a different class");
  return Littlestone(members);
}

int GameSolver::Littlestone(const BitVector& g) const {
  const std::size_t c = g.count();
  if (c == 0) return -1;
  if (c == 1) return 0;
  {
    std::shared_lock lock(mu_);
    auto it = ld_memo_.find(g);
    if (it != ld_memo_.end()) return it->second;
  }
  const int upper = FloorLog2(c);
  int best = 0;
  const std::size_t n = cls_->domain().size();
  for (std::size_t x = 0; x < n && best < upper; ++x) {
    BitVector one = g & cls_->ones(static_cast<Point>(x));
    const std::size_t c1 = one.count();
    if (c1 == 0 || c1 == c) continue;
    const std::size_t c0 = c - c1;
    if (1 + FloorLog2(std::min(c0, c1)) <= best) continue;
    BitVector zero = g;
    zero.subtract(one);
    const BitVector& small = c0 <= c1 ? zero : one;
    const BitVector& large = c0 <= c1 ? one : zero;
    const int a = Littlestone(small);
    if (1 + a <= best) continue;
    const int b = Littlestone(large);
    best = std::max(best, 1 + std::min(a, b));
  }
  std::unique_lock lock(mu_);
  ld_memo_.emplace(g, best);
  return best;
}

Label GameSolver::littlestone_move(const BitVector& members, Point x) const {
  cls_->domain().check(x);
  const int v0 = littlestone(cls_->consistent(members, x, 0));
  const int v1 = littlestone(cls_->consistent(members, x, 1));
  return v1 < v0 ? 1 : 0;
}

BitVector GameSolver::cell(const BitVector& members, std::span<const Point> tuple, const BitVector& pattern) const {
  BitVector r = members;
  for (std::size_t i = 0; i < tuple.size(); ++i) r = cls_->consistent(r, tuple[i], pattern.test(i) ? 1 : 0);
  return r;
}

// Enumerates increasing tuples of distinct points that shatter a set,
// splitting cells incrementally. Cells are kept in code order.
struct GameSolver::VclSearch {
  const GameSolver& solver;
  std::uint64_t steps = 0;

  void Tick() {
    if (++steps > solver.budget_.vcl_nodes) {
      throw BudgetError("VCL search exceeded " + std::to_string(solver.budget_.vcl_nodes) + " steps");
    }
  }

  // Calls visit(tuple, cells) for each shattering tuple whose cells all
  // have at least `min_cell` members; visit returns true to stop.
  bool ForEachTuple(const BitVector& g, std::size_t width, std::uint64_t min_cell,
                    const std::function<bool(const std::vector<Point>&, const std::vector<BitVector>&)>& visit) {
    std::vector<Point> tuple;
    std::vector<BitVector> cells{g};
    return Extend(tuple, cells, 0, width, min_cell, visit);
  }

  bool Extend(std::vector<Point>& tuple, const std::vector<BitVector>& cells, std::size_t from,
              std::size_t width, std::uint64_t min_cell,
              const std::function<bool(const std::vector<Point>&, const std::vector<BitVector>&)>& visit) {
    if (tuple.size() == width) return visit(tuple, cells);
    const ConceptClass& cls = *solver.cls_;
    const std::size_t n = cls.domain().size();
    const std::size_t remaining = width - tuple.size();
    // Each current cell must still split into 2^(remaining-1) cells of size
    // min_cell after this point.
    const std::uint64_t need = remaining - 1 >= 63 || min_cell > (std::uint64_t{1} << (63 - (remaining - 1)))
                                   ? ~std::uint64_t{0}
                                   : (std::uint64_t{1} << (remaining - 1)) * min_cell;
    std::vector<BitVector> next;
    for (std::size_t x = from; x + remaining <= n; ++x) {
      Tick();
      next.clear();
      bool ok = true;
      for (const BitVector& c : cells) {
        BitVector one = c & cls.ones(static_cast<Point>(x));
        BitVector zero = c;
        zero.subtract(one);
        const std::uint64_t c0 = zero.count();
        const std::uint64_t c1 = one.count();
        if (c0 == 0 || c1 == 0 || c0 < need || c1 < need) {
          ok = false;
          break;
        }
        next.push_back(std::move(zero));
        next.push_back(std::move(one));
      }
      if (!ok) continue;
      tuple.push_back(static_cast<Point>(x));
      std::vector<BitVector> copy = next;
      const bool stop = Extend(tuple, copy, x + 1, width, min_cell, visit);
      tuple.pop_back();
      if (stop) return true;
    }
    return false;
  }

  int Value(const BitVector& g, std::size_t round) {
    const std::size_t c = g.count();
    if (c == 0) return -1;
    if (round >= 63 || c < (std::size_t{1} << round)) return 0;
    {
      std::shared_lock lock(solver.mu_);
      auto it = solver.vcl_memo_.find(VclKey{g, round});
      if (it != solver.vcl_memo_.end()) return it->second;
    }
    int upper = 0;
    while (c >= MinSizeForValue(round, upper + 1)) ++upper;
    int best = 0;
    ForEachTuple(g, round, 1, [&](const std::vector<Point>&, const std::vector<BitVector>& cells) {
      // Smallest cells first: they bound the minimum fastest.
      std::vector<std::size_t> order(cells.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return cells[a].count() < cells[b].count(); });
      int worst = upper;
      for (std::size_t i : order) {
        if (cells[i].count() < MinSizeForValue(round + 1, best)) {
          worst = -1;
          break;
        }
        worst = std::min(worst, Value(cells[i], round + 1));
        if (1 + worst <= best) break;
      }
      best = std::max(best, 1 + worst);
      return best >= upper;
    });
    std::unique_lock lock(solver.mu_);
    solver.vcl_memo_.emplace(VclKey{g, round}, best);
    return best;
  }
};

int GameSolver::vcl_value(const BitVector& members, std::size_t round) const {
  if (members.size() != cls_->size()) throw UsageError("member set over a different class");
  if (round == 0) throw UsageError("VCL rounds start at 1");
  VclSearch s{*this};
  return s.Value(members, round);
}

BitVector GameSolver::vcl_move(const BitVector& members, std::span<const Point> tuple) const {
  if (tuple.empty()) throw UsageError("vcl_move needs a nonempty tuple");
  if (tuple.size() > 24) throw BudgetError("vcl_move over more than 24 coordinates");
  for (Point p : tuple) cls_->domain().check(p);
  const std::size_t width = tuple.size();
  // Cells in code order via repeated splitting.
  std::vector<BitVector> cells{members};
  for (Point x : tuple) {
    std::vector<BitVector> next;
    next.reserve(cells.size() * 2);
    for (const BitVector& c : cells) {
      next.push_back(cls_->consistent(c, x, 0));
      next.push_back(cls_->consistent(c, x, 1));
    }
    cells = std::move(next);
  }
  // An empty cell has value -1, the minimum, so the first one wins.
  for (std::uint64_t code = 0; code < cells.size(); ++code) {
    if (cells[code].none()) return code_pattern(code, width);
  }
  std::uint64_t best_code = 0;
  int best = 0;
  bool have = false;
  for (std::uint64_t code = 0; code < cells.size(); ++code) {
    const int v = vcl_value(cells[code], width + 1);
    if (!have || v < best) {
      best = v;
      best_code = code;
      have = true;
    }
  }
  return code_pattern(best_code, width);
}

// ---------------------------------------------------------- free functions

namespace {

std::shared_ptr<GameSolver> SolverFor(const ConceptClass& cls, SearchBudget budget = {}) {
  return std::make_shared<GameSolver>(std::make_shared<const ConceptClass>(cls), budget);
}

}  // namespace

Capped littlestone_dimension(const ConceptClass& cls, int cap) {
  if (cap < 0) throw UsageError("cap must be nonnegative");
  const int v = SolverFor(cls)->littlestone(cls.all());
  if (v > cap) return {cap, true};
  return {v, false};
}

std::optional<LittlestoneTree> find_littlestone_tree(const GameSolver& solver, int depth) {
  if (depth < 1) throw UsageError("tree depth must be at least 1");
  const ConceptClass& cls = solver.concept_class();
  if (solver.littlestone(cls.all()) < depth) return std::nullopt;
  LittlestoneTree tree;
  tree.depth = depth;
  tree.nodes.assign((std::size_t{1} << depth) - 1, 0);
  std::vector<Label> prefix;
  auto build = [&](auto&& self, const BitVector& g) -> void {
    const int k = static_cast<int>(prefix.size());
    if (k == depth) return;
    const int need = depth - k - 1;
    for (Point x = 0; x < cls.domain().size(); ++x) {
      BitVector g0 = cls.consistent(g, x, 0);
      BitVector g1 = cls.consistent(g, x, 1);
      if (solver.littlestone(g0) >= need && solver.littlestone(g1) >= need) {
        tree.nodes[LittlestoneTree::index(prefix)] = x;
        prefix.push_back(0);
        self(self, g0);
        prefix.back() = 1;
        self(self, g1);
        prefix.pop_back();
        return;
      }
    }
    throw StateError("Littlestone value inconsistent with tree search");
  };
  build(build, cls.all());
  return tree;
}

std::optional<LittlestoneTree> find_littlestone_tree(const ConceptClass& cls, int depth) {
  return find_littlestone_tree(*SolverFor(cls), depth);
}

Capped vcl_dimension(const ConceptClass& cls, int cap, SearchBudget budget) {
  if (cap < 0) throw UsageError("cap must be nonnegative");
  const int v = std::max(0, SolverFor(cls, budget)->vcl_value(cls.all(), 1));
  if (v > cap) return {cap, true};
  return {v, false};
}

std::optional<VclTree> find_vcl_tree(const GameSolver& solver, int depth) {
  if (depth < 1) throw UsageError("tree depth must be at least 1");
  const ConceptClass& cls = solver.concept_class();
  if (cls.empty() || solver.vcl_value(cls.all(), 1) < depth) return std::nullopt;
  VclTree tree;
  tree.depth = depth;
  tree.nodes.emplace_back();
  auto build = [&](auto&& self, std::size_t node, const BitVector& g, std::size_t k) -> void {
    const std::size_t width = k + 1;
    const int below = depth - static_cast<int>(k) - 1;
    std::vector<BitVector> cells;
    // First increasing tuple whose cells all keep `below` more levels.
    GameSolver::VclSearch search{solver};
    std::vector<Point> chosen;
    search.ForEachTuple(g, width, 1, [&](const std::vector<Point>& tuple, const std::vector<BitVector>& cs) {
      for (const BitVector& c : cs) {
        if (solver.vcl_value(c, width + 1) < below) return false;
      }
      chosen = tuple;
      cells = cs;
      return true;
    });
    if (chosen.empty()) throw StateError("VCL value inconsistent with tree search");
    tree.nodes[node].tuple = chosen;
    if (below == 0) return;
    const std::size_t first = tree.nodes.size();
    tree.nodes[node].first_child = first;
    tree.nodes.resize(first + cells.size());
    for (std::size_t code = 0; code < cells.size(); ++code) self(self, first + code, cells[code], k + 1);
  };
  build(build, 0, cls.all(), 0);
  return tree;
}

std::optional<VclTree> find_vcl_tree(const ConceptClass& cls, int depth, SearchBudget budget) {
  return find_vcl_tree(*SolverFor(cls, budget), depth);
}

GamePosition make_position(const ConceptClass& cls, std::vector<Constraint> constraints) {
  const BitVector members = cls.consistent(constraints);
  const int v = SolverFor(cls)->littlestone(members);
  return GamePosition{std::move(constraints), Capped{v, false}};
}

Label gale_stewart_move(const ConceptClass& cls, const GamePosition& position, Point x) {
  if (position.value.value < 0) throw StateError("position is terminal");
  const BitVector members = cls.consistent(position.constraints);
  return SolverFor(cls)->littlestone_move(members, x);
}

// ---------------------------------------------------------------- checkers

namespace {

bool SomeRowAgrees(const ConceptClass& cls, const std::vector<Constraint>& cs) {
  for (const BitVector& row : cls.rows()) {
    bool ok = true;
    for (const Constraint& c : cs) {
      if (row.test(c.point) != (c.label != 0)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

bool is_littlestone_tree(const ConceptClass& cls, const LittlestoneTree& tree) {
  if (tree.depth < 0 || tree.depth > 24) return false;
  if (tree.nodes.size() != (std::size_t{1} << tree.depth) - 1) return false;
  for (Point p : tree.nodes) {
    if (!cls.domain().contains(p)) return false;
  }
  if (tree.depth == 0) return !cls.empty();
  // Every full path must be realized; prefixes then are too.
  for (std::uint64_t leaf = 0; leaf < (std::uint64_t{1} << tree.depth); ++leaf) {
    std::vector<Constraint> cs;
    std::size_t heap = 0;
    for (int k = 0; k < tree.depth; ++k) {
      const Label y = (leaf >> (tree.depth - 1 - k)) & 1U;
      cs.push_back({tree.nodes[heap], y});
      heap = 2 * heap + 1 + y;
    }
    if (!SomeRowAgrees(cls, cs)) return false;
  }
  return true;
}

bool is_vcl_tree(const ConceptClass& cls, const VclTree& tree) {
  if (tree.depth < 1) return false;
  if (tree.nodes.empty()) return false;
  std::vector<Constraint> cs;
  auto walk = [&](auto&& self, std::size_t node, int k) -> bool {
    if (node >= tree.nodes.size()) return false;
    const auto& tuple = tree.nodes[node].tuple;
    if (tuple.size() != static_cast<std::size_t>(k) + 1) return false;
    for (Point p : tuple) {
      if (!cls.domain().contains(p)) return false;
    }
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << tuple.size()); ++code) {
      const std::size_t mark = cs.size();
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        cs.push_back({tuple[i], static_cast<Label>((code >> (tuple.size() - 1 - i)) & 1U)});
      }
      bool ok;
      if (k + 1 == tree.depth) {
        ok = SomeRowAgrees(cls, cs);
      } else {
        ok = self(self, tree.nodes[node].first_child + code, k + 1);
      }
      cs.resize(mark);
      if (!ok) return false;
    }
    return true;
  };
  return walk(walk, 0, 0);
}

}  // namespace ulearn
