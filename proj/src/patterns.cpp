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

#include "ulearn/patterns.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

#include "flow.hpp"
#include "ulearn/errors.hpp"

namespace ulearn {

// ------------------------------------------------------------ VCL game move

namespace {

BitVector PositionMembers(const GameSolver& solver, const VclPosition& position) {
  if (position.tuples.size() != position.patterns.size()) throw UsageError("malformed VCL position");
  BitVector members = solver.concept_class().all();
  for (std::size_t s = 0; s < position.tuples.size(); ++s) {
    if (position.tuples[s].size() != s + 1) throw UsageError("VCL position tuple has the wrong width");
    members = solver.cell(members, position.tuples[s], position.patterns[s]);
  }
  return members;
}

}  // namespace

BitVector vcl_move(const GameSolver& solver, const VclPosition& position, std::span<const Point> tuple) {
  if (tuple.size() != position.round()) throw UsageError("tuple width must equal the game round");
  return solver.vcl_move(PositionMembers(solver, position), tuple);
}

BitVector vcl_move(const ConceptClass& cls, const VclPosition& position, std::span<const Point> tuple,
                   SearchBudget budget) {
  GameSolver solver(std::make_shared<const ConceptClass>(cls), budget);
  return vcl_move(solver, position, tuple);
}

// ---------------------------------------------------------------- avoider

PatternAvoider::PatternAvoider(std::shared_ptr<const GameSolver> solver) : solver_(std::move(solver)) {
  if (!solver_) throw UsageError("pattern avoider needs a solver");
  members_ = solver_->concept_class().all();
}

BitVector PatternAvoider::forbidden(std::span<const Point> z) const {
  if (z.size() != arity()) {
    throw UsageError("forbidden() expects " + std::to_string(arity()) + " points, got " +
                     std::to_string(z.size()));
  }
  return solver_->vcl_move(members_, z);
}

void PatternAvoider::observe(Point x, Label y) {
  solver_->concept_class().domain().check(x);
  window_.push_back({x, y});
  while (window_.size() > arity()) window_.pop_front();
  if (window_.size() < arity()) return;
  std::vector<Point> z;
  BitVector labels(window_.size());
  for (std::size_t i = 0; i < window_.size(); ++i) {
    z.push_back(window_[i].point);
    labels.set(i, window_[i].label != 0);
  }
  if (forbidden(z) == labels) {
    members_ = solver_->cell(members_, z, labels);
    position_.tuples.push_back(std::move(z));
    position_.patterns.push_back(std::move(labels));
  }
}

ForbiddenFn PatternAvoider::as_function() const {
  const std::size_t t = arity();
  return ForbiddenFn{t, [solver = solver_, members = members_, t](std::span<const Point> z) {
                       if (z.size() != t) throw UsageError("forbidden-pattern arity mismatch");
                       return solver->vcl_move(members, z);
                     }};
}

PatternAvoider avoider_step(PatternAvoider av, Point x, Label y) {
  av.observe(x, y);
  return av;
}

// -------------------------------------------------------- pattern classes

namespace {

struct PointsHash {
  std::size_t operator()(const std::vector<Point>& v) const {
    std::size_t h = v.size();
    for (Point p : v) h = h * 1000003u ^ p;
    return h;
  }
};

// Incremental avoidance test. A partial pattern is summarized by the
// multiset of (point, bit) types it contains, with counts capped at
// arity - 1 (no tuple uses more copies than that).
class AvoidanceChecker {
 public:
  using Type = std::uint64_t;  // point * 2 + bit
  using State = std::vector<std::pair<Type, std::uint32_t>>;  // sorted by type

  explicit AvoidanceChecker(const ForbiddenFn& g) : g_(g), t_(g.arity) {
    if (t_ == 0) throw UsageError("forbidden-pattern arity must be positive");
  }

  std::size_t arity() const { return t_; }

  // Would adding type `n` complete a forbidden tuple?
  bool Violates(const State& state, Type n) {
    if (t_ == 1) return Matches({n});
    std::vector<Type> seq;
    std::vector<std::uint32_t> used(state.size(), 0);
    return Search(state, used, seq, n);
  }

  void Add(State& state, Type n) const {
    auto it = std::lower_bound(state.begin(), state.end(), std::make_pair(n, std::uint32_t{0}));
    if (it != state.end() && it->first == n) {
      if (it->second + 1 < t_) ++it->second;
    } else if (t_ > 1) {
      state.insert(it, {n, 1});
    }
  }

 private:
  bool Search(const State& state, std::vector<std::uint32_t>& used, std::vector<Type>& seq, Type n) {
    if (seq.size() + 1 == t_) {
      std::vector<Type> full(seq);
      for (std::size_t pos = 0; pos < t_; ++pos) {
        full.insert(full.begin() + static_cast<std::ptrdiff_t>(pos), n);
        if (Matches(full)) return true;
        full.erase(full.begin() + static_cast<std::ptrdiff_t>(pos));
      }
      return false;
    }
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (used[i] == state[i].second) continue;
      ++used[i];
      seq.push_back(state[i].first);
      const bool hit = Search(state, used, seq, n);
      seq.pop_back();
      --used[i];
      if (hit) return true;
    }
    return false;
  }

  bool Matches(const std::vector<Type>& types) {
    std::vector<Point> pts(types.size());
    for (std::size_t i = 0; i < types.size(); ++i) pts[i] = static_cast<Point>(types[i] >> 1);
    auto it = cache_.find(pts);
    if (it == cache_.end()) {
      BitVector f = g_(pts);
      if (f.size() != t_) throw UsageError("forbidden-pattern function returned the wrong width");
      it = cache_.emplace(std::move(pts), std::move(f)).first;
    }
    for (std::size_t i = 0; i < types.size(); ++i) {
      if (it->second.test(i) != ((types[i] & 1U) != 0)) return false;
    }
    return true;
  }

  const ForbiddenFn& g_;
  std::size_t t_;
  std::unordered_map<std::vector<Point>, BitVector, PointsHash> cache_;
};

AvoidanceChecker::Type TypeOf(Point p, bool bit) { return (static_cast<AvoidanceChecker::Type>(p) << 1) | (bit ? 1U : 0U); }

struct Enumerated {
  std::vector<BitVector> patterns;
  std::vector<AvoidanceChecker::State> states;
};

// Depth-first enumeration, bit 0 before bit 1 at every coordinate.
Enumerated Enumerate(std::span<const Point> points, AvoidanceChecker& checker, EnumerationBudget budget,
                     bool keep_states) {
  Enumerated out;
  std::uint64_t nodes = 0;
  BitVector pattern(points.size());
  auto dfs = [&](auto&& self, std::size_t j, const AvoidanceChecker::State& state) -> void {
    if (++nodes > budget.max_nodes) {
      throw BudgetError("pattern class enumeration exceeded " + std::to_string(budget.max_nodes) + " nodes");
    }
    if (j == points.size()) {
      out.patterns.push_back(pattern);
      if (keep_states) out.states.push_back(state);
      return;
    }
    for (int b = 0; b < 2; ++b) {
      const auto type = TypeOf(points[j], b != 0);
      if (checker.Violates(state, type)) continue;
      AvoidanceChecker::State next = state;
      checker.Add(next, type);
      pattern.set(j, b != 0);
      self(self, j + 1, next);
    }
    pattern.reset(j);
  };
  dfs(dfs, 0, {});
  return out;
}

}  // namespace

PatternSet build_pattern_class(std::span<const Point> points, const ForbiddenFn& g, EnumerationBudget budget) {
  AvoidanceChecker checker(g);
  Enumerated e = Enumerate(points, checker, budget, false);
  return PatternSet(points.size(), std::move(e.patterns));
}

// ------------------------------------------------------- one-inclusion graph

OneInclusionGraph::OneInclusionGraph(PatternSet vertices) : vertices_(std::move(vertices)) {
  const std::size_t nv = vertices_.size();
  const std::size_t n = vertices_.arity();
  incident_.assign(nv, {});
  if (nv <= 4096) {
    for (std::size_t a = 0; a < nv; ++a) {
      for (std::size_t b = a + 1; b < nv; ++b) {
        const BitVector diff = vertices_[a] ^ vertices_[b];
        if (diff.count() != 1) continue;
        const std::size_t coord = diff.find_first();
        const bool a_zero = !vertices_[a].test(coord);
        const std::size_t zero = a_zero ? a : b;
        const std::size_t one = a_zero ? b : a;
        edges_.push_back({zero, one, coord, one});
      }
    }
  } else {
    for (std::size_t a = 0; a < nv; ++a) {
      for (std::size_t c = 0; c < n; ++c) {
        if (vertices_[a].test(c)) continue;
        BitVector flipped = vertices_[a];
        flipped.set(c);
        const std::size_t b = vertices_.index_of(flipped);
        if (b != BitVector::npos) edges_.push_back({a, b, c, b});
      }
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.zero, x.coord) < std::tie(y.zero, y.coord);
  });
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    incident_[edges_[e].zero].push_back(e);
    incident_[edges_[e].one].push_back(e);
  }
}

std::vector<std::size_t> OneInclusionGraph::out_degrees() const {
  std::vector<std::size_t> deg(vertices_.size(), 0);
  for (const Edge& e : edges_) ++deg[e.head == e.one ? e.zero : e.one];
  return deg;
}

std::size_t OneInclusionGraph::max_out_degree() const {
  auto deg = out_degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::size_t OneInclusionGraph::edge_between(std::size_t a, std::size_t b) const {
  for (std::size_t e : incident_[a]) {
    if (edges_[e].zero == b || edges_[e].one == b) return e;
  }
  return BitVector::npos;
}

namespace {

// Can every edge pick a tail so that no vertex is the tail of more than
// `bound` edges? Fills `tails` when feasible.
bool Feasible(const OneInclusionGraph& g, std::size_t bound, std::vector<std::size_t>* tails) {
  const auto& edges = g.edges();
  const std::size_t ne = edges.size();
  const std::size_t nv = g.vertices().size();
  const std::size_t source = 0;
  const std::size_t sink = 1;
  internal::MaxFlow flow(2 + ne + nv);
  std::vector<std::size_t> to_zero(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    flow.AddArc(source, 2 + e, 1);
    to_zero[e] = flow.AddArc(2 + e, 2 + ne + edges[e].zero, 1);
    flow.AddArc(2 + e, 2 + ne + edges[e].one, 1);
  }
  for (std::size_t v = 0; v < nv; ++v) flow.AddArc(2 + ne + v, sink, static_cast<std::int64_t>(bound));
  if (flow.Run(source, sink) != static_cast<std::int64_t>(ne)) return false;
  if (tails) {
    tails->resize(ne);
    for (std::size_t e = 0; e < ne; ++e) (*tails)[e] = flow.Flow(to_zero[e]) > 0 ? edges[e].zero : edges[e].one;
  }
  return true;
}

}  // namespace

OneInclusionGraph orient(OneInclusionGraph graph) {
  if (graph.vertices().empty()) throw UsageError("cannot orient an empty graph");
  const std::size_t ne = graph.edges().size();
  const std::size_t nv = graph.vertices().size();
  std::size_t hi = 0;
  {
    std::vector<std::size_t> deg(nv, 0);
    for (const auto& e : graph.edges()) {
      ++deg[e.zero];
      ++deg[e.one];
    }
    for (std::size_t d : deg) hi = std::max(hi, d);
  }
  std::size_t lo = (ne + nv - 1) / nv;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (Feasible(graph, mid, nullptr)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  std::vector<std::size_t> tails;
  if (!Feasible(graph, lo, &tails)) throw StateError("orientation bound search failed");
  auto& edges = graph.mutable_edges();
  for (std::size_t e = 0; e < ne; ++e) edges[e].head = tails[e] == edges[e].zero ? edges[e].one : edges[e].zero;
  graph.set_oriented(true);
  return graph;
}

Label one_inclusion_predict(const OneInclusionGraph& graph, std::span<const CoordLabel> labeled,
                            std::size_t query) {
  const std::size_t n = graph.vertices().arity();
  if (labeled.size() + 1 != n || query >= n) throw UsageError("labels plus query must cover every coordinate");
  BitVector seen(n);
  seen.set(query);
  BitVector c0(n);
  for (const CoordLabel& cl : labeled) {
    if (cl.index >= n || seen.test(cl.index)) throw UsageError("labeled indices must be distinct coordinates");
    seen.set(cl.index);
    c0.set(cl.index, cl.label != 0);
  }
  BitVector c1 = c0;
  c1.set(query);
  const std::size_t i0 = graph.vertices().index_of(c0);
  const std::size_t i1 = graph.vertices().index_of(c1);
  if (i0 == BitVector::npos && i1 == BitVector::npos) return 0;
  if (i1 == BitVector::npos) return 0;
  if (i0 == BitVector::npos) return 1;
  if (!graph.oriented()) throw UsageError("one_inclusion_predict needs an oriented graph");
  const std::size_t e = graph.edge_between(i0, i1);
  return graph.edges()[e].head == i1 ? 1 : 0;
}

// ------------------------------------------------------ incremental predictor

struct OneInclusionPredictor::Impl {
  ForbiddenFn g;
  std::vector<LabeledPoint> labeled;
  EnumerationBudget budget;
  std::mutex mu;
  AvoidanceChecker checker{g};
  bool truth_in_class = true;
  AvoidanceChecker::State truth_state;
  BitVector truth;
  bool enumerated = false;
  Enumerated prefix;  // patterns over the labeled coordinates
  std::unordered_map<Point, Label> answers;

  Impl(ForbiddenFn fn, std::vector<LabeledPoint> pts, EnumerationBudget b)
      : g(std::move(fn)), labeled(std::move(pts)), budget(b), truth(labeled.size()) {
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      const auto type = TypeOf(labeled[i].point, labeled[i].label != 0);
      truth.set(i, labeled[i].label != 0);
      if (truth_in_class && checker.Violates(truth_state, type)) truth_in_class = false;
      checker.Add(truth_state, type);
    }
  }

  Label Predict(Point x) {
    if (!truth_in_class) return 0;
    const bool allow0 = !checker.Violates(truth_state, TypeOf(x, false));
    const bool allow1 = !checker.Violates(truth_state, TypeOf(x, true));
    if (!allow0 && !allow1) return 0;
    if (allow0 != allow1) return allow1 ? 1 : 0;
    auto it = answers.find(x);
    if (it != answers.end()) return it->second;
    if (!enumerated) {
      std::vector<Point> pts;
      for (const LabeledPoint& lp : labeled) pts.push_back(lp.point);
      prefix = Enumerate(pts, checker, budget, true);
      enumerated = true;
    }
    const std::size_t m = labeled.size() + 1;
    std::vector<BitVector> full;
    for (std::size_t i = 0; i < prefix.patterns.size(); ++i) {
      for (int b = 0; b < 2; ++b) {
        if (checker.Violates(prefix.states[i], TypeOf(x, b != 0))) continue;
        BitVector p = prefix.patterns[i];
        p.push_back(b != 0);
        full.push_back(std::move(p));
      }
    }
    (void)m;
    OneInclusionGraph graph = orient(OneInclusionGraph(PatternSet(labeled.size() + 1, std::move(full))));
    std::vector<CoordLabel> cls;
    for (std::size_t i = 0; i < labeled.size(); ++i) cls.push_back({i, labeled[i].label});
    const Label y = one_inclusion_predict(graph, cls, labeled.size());
    answers.emplace(x, y);
    return y;
  }
};

OneInclusionPredictor::OneInclusionPredictor(ForbiddenFn g, std::vector<LabeledPoint> labeled,
                                             EnumerationBudget budget)
    : impl_(std::make_unique<Impl>(std::move(g), std::move(labeled), budget)) {}

OneInclusionPredictor::~OneInclusionPredictor() = default;

Label OneInclusionPredictor::predict(Point query) const {
  std::lock_guard lock(impl_->mu);
  return impl_->Predict(query);
}

std::size_t OneInclusionPredictor::arity() const { return impl_->g.arity; }

}  // namespace ulearn
