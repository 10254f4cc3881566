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

#include "ulearn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ulearn/errors.hpp"

namespace ulearn {

namespace {

template <typename T>
T Get(const Json& obj, const char* key, T fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

template <typename T>
T Require(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(std::string("missing \"") + key + "\"");
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

Point ParsePoint(const Json& v, const Domain& domain) {
  if (v.is_string()) {
    auto p = domain.find(v.get<std::string>());
    if (!p) throw ConfigError("unknown point \"" + v.get<std::string>() + "\"");
    return *p;
  }
  if (!v.is_number_integer()) throw ConfigError("points are integers or names");
  const auto p = v.get<std::int64_t>();
  if (p < 0 || static_cast<std::uint64_t>(p) >= domain.size()) throw ConfigError("point index out of range");
  return static_cast<Point>(p);
}

BitVector ParseBits(const std::string& s) {
  for (char c : s) {
    if (c != '0' && c != '1') throw ConfigError("bit strings use only 0 and 1: \"" + s + "\"");
  }
  return BitVector::FromString(s);
}

ErmSchedule ScheduleFrom(const Json& params) {
  return erm_failure_schedule(parse_rate(Require<Json>(params, "rate")), Require<std::size_t>(params, "blocks"),
                              Get<unsigned>(params, "max_exponent", 24));
}

std::shared_ptr<const Generator> MakeGenerator(const std::string& name, const Json& params) {
  auto m = [&] {
    const auto v = Require<std::size_t>(params, "M");
    if (v < 1) throw ConfigError("M must be positive");
    return v;
  };
  if (name == "thresholds") return std::make_shared<Thresholds>(m());
  if (name == "real_thresholds") return std::make_shared<Thresholds>(Thresholds::Dyadic(Require<std::size_t>(params, "levels")));
  if (name == "half_intervals") return std::make_shared<HalfIntervals>(m());
  if (name == "singletons") return std::make_shared<Singletons>(m());
  if (name == "full") return std::make_shared<FullClass>(m());
  if (name == "disjoint_powerset") return std::make_shared<DisjointPowerset>(Require<std::size_t>(params, "blocks"));
  if (name == "tree_structured") return std::make_shared<TreeStructured>(Require<std::size_t>(params, "depth"));
  if (name == "erm_failure") {
    if (params.contains("exponents")) return std::make_shared<ErmFailureClass>(Require<std::vector<unsigned>>(params, "exponents"));
    return std::make_shared<ErmFailureClass>(erm_failure_class(ScheduleFrom(params)));
  }
  throw ConfigError("unknown generator \"" + name + "\"");
}

}  // namespace

std::vector<std::string> generator_names() {
  return {"thresholds",        "real_thresholds", "half_intervals", "singletons",
          "full",              "disjoint_powerset", "tree_structured", "erm_failure"};
}

ClassHandle parse_class(const Json& spec) {
  if (!spec.is_object()) throw ConfigError("class spec must be an object");
  ClassHandle h;
  h.spec = spec;
  if (spec.contains("matrix")) {
    const auto rows = Require<std::vector<std::string>>(spec, "matrix");
    if (rows.empty()) throw ConfigError("matrix needs at least one row");
    std::vector<BitVector> bits;
    for (const std::string& r : rows) {
      if (r.size() != rows.front().size()) throw ConfigError("matrix rows differ in length");
      bits.push_back(ParseBits(r));
    }
    std::vector<std::string> names = Get<std::vector<std::string>>(spec, "points", {});
    if (names.empty()) {
      for (std::size_t i = 0; i < rows.front().size(); ++i) names.push_back(std::to_string(i));
    }
    if (names.size() != rows.front().size()) throw ConfigError("point names do not match the row length");
    h.gen = std::make_shared<ExplicitClass>(ConceptClass(Domain(names), bits));
  } else if (spec.contains("generator")) {
    h.gen = MakeGenerator(Require<std::string>(spec, "generator"), Get<Json>(spec, "params", Json::object()));
  } else {
    throw ConfigError("class spec needs \"matrix\" or \"generator\"");
  }
  if (h.gen->expandable()) {
    h.cls = expand_shared(*h.gen);
    h.solver = std::make_shared<const GameSolver>(h.cls);
  }
  return h;
}

Rational parse_rational(const Json& v) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (!v.is_string()) throw ConfigError("rationals are integers or \"p/q\" strings");
  const std::string s = v.get<std::string>();
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(static_cast<std::int64_t>(std::stoll(s)));
    const auto den = static_cast<std::int64_t>(std::stoll(s.substr(slash + 1)));
    if (den == 0) throw ConfigError("zero denominator in \"" + s + "\"");
    return Rational(HyperInt(static_cast<std::int64_t>(std::stoll(s.substr(0, slash)))), HyperInt(den));
  } catch (const std::logic_error&) {
    throw ConfigError("bad rational \"" + s + "\"");
  }
}

RateFunction parse_rate(const Json& spec) {
  const auto kind = Require<std::string>(spec, "kind");
  if (kind == "inverse_log") return RateFunction::InverseLog();
  if (kind == "power") return RateFunction::Power(Get<unsigned>(spec, "root", 2));
  if (kind == "tabulated") {
    std::vector<std::pair<std::uint64_t, Rational>> knots;
    for (const Json& k : Require<Json>(spec, "knots")) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number_unsigned()) throw ConfigError("knots are [n, value] pairs");
      knots.emplace_back(k[0].get<std::uint64_t>(), parse_rational(k[1]));
    }
    return RateFunction::Tabulated(std::move(knots));
  }
  throw ConfigError("unknown rate kind \"" + kind + "\"");
}

RealizableDistribution parse_distribution(const Json& spec, const ClassHandle& h) {
  const auto name = Require<std::string>(spec, "construction");
  const Domain& domain = h.gen->domain();
  auto need_class = [&]() -> const ConceptClass& {
    if (!h.cls) throw ConstructionError(name + " needs an expandable class");
    return *h.cls;
  };
  if (name == "uniform_target") {
    if (spec.contains("labels")) {
      const BitVector target = ParseBits(Require<std::string>(spec, "labels"));
      if (target.size() != domain.size()) throw ConfigError("target labels have the wrong width");
      std::vector<Constraint> all;
      for (Point x = 0; x < domain.size(); ++x) all.push_back({x, static_cast<Label>(target.test(x) ? 1 : 0)});
      if (!h.gen->consistent(all)) throw RealizabilityError("target labels are not a hypothesis of the class");
      return uniform_target_dist(domain, target);
    }
    const ConceptClass& cls = need_class();
    const auto index = Get<std::size_t>(spec, "target", cls.size() / 2);
    if (index >= cls.size()) throw ConfigError("target index out of range");
    return uniform_target_dist(domain, cls.row(index));
  }
  if (name == "explicit") {
    std::vector<Atom> atoms;
    std::vector<Rational> exact;
    bool all_exact = true;
    std::vector<Constraint> constraints;
    for (const Json& a : Require<Json>(spec, "atoms")) {
      if (!a.is_array() || a.size() != 3) throw ConfigError("atoms are [point, label, probability]");
      const Point x = ParsePoint(a[0], domain);
      const auto y = a[1].get<int>();
      if (y != 0 && y != 1) throw ConfigError("labels are 0 or 1");
      double p;
      if (a[2].is_string()) {
        exact.push_back(parse_rational(a[2]));
        p = exact.back().to_double();
      } else {
        all_exact = false;
        p = a[2].get<double>();
      }
      atoms.push_back({x, static_cast<Label>(y), p});
      constraints.push_back({x, static_cast<Label>(y)});
    }
    auto cert = h.gen->first_consistent(constraints);
    if (!cert) throw RealizabilityError("no hypothesis labels the atoms correctly");
    std::optional<std::vector<Rational>> ex;
    if (all_exact) ex = std::move(exact);
    return RealizableDistribution(domain, std::move(atoms), *cert, "explicit", std::move(ex));
  }
  if (name == "lower_bound_pair") {
    const auto which = Get<int>(spec, "which", 0);
    if (which != 0 && which != 1) throw ConfigError("\"which\" is 0 or 1");
    LowerBoundPair pair = exp_lower_bound_pair(need_class());
    return which == 0 ? pair.p0 : pair.p1;
  }
  if (name == "littlestone_adversary") {
    need_class();
    const int ld = h.solver->littlestone(h.cls->all());
    const auto depth = Get<int>(spec, "depth", ld);
    if (depth < 1) throw ConfigError("depth must be at least 1");
    auto tree = find_littlestone_tree(*h.solver, depth);
    if (!tree) throw ConstructionError("class has no Littlestone tree of depth " + std::to_string(depth));
    const std::string branch = Get<std::string>(spec, "branch", std::string(static_cast<std::size_t>(depth), '0'));
    const BitVector bits = ParseBits(branch);
    if (static_cast<int>(bits.size()) > depth) throw ConfigError("branch longer than the tree");
    std::vector<Label> y;
    for (std::size_t i = 0; i < bits.size(); ++i) y.push_back(bits.test(i) ? 1 : 0);
    return littlestone_adversary_dist(*h.gen, *tree, y);
  }
  if (name == "vcl_adversary") {
    const SlowRateSchedule schedule =
        build_slow_schedule(parse_rate(Require<Json>(spec, "rate")), Require<std::size_t>(spec, "i_max"));
    const HyperInt& k_max = schedule.k.back();
    if (!k_max.is_small() || k_max.to_int64() > 64) throw ConstructionError("k_imax = " + k_max.to_string() + " is too deep");
    const auto depth = static_cast<int>(k_max.to_int64());
    VclTree tree;
    if (const auto* ts = dynamic_cast<const TreeStructured*>(h.gen.get())) {
      tree = tree_structured_vcl_tree(*ts);
    } else {
      need_class();
      auto t = find_vcl_tree(*h.solver, depth);
      if (!t) throw ConstructionError("class has no VCL tree of depth " + std::to_string(depth));
      tree = std::move(*t);
    }
    std::vector<BitVector> y;
    const auto given = Get<std::vector<std::string>>(spec, "branch", {});
    for (int k = 1; k <= depth; ++k) {
      if (static_cast<std::size_t>(k) <= given.size()) {
        y.push_back(ParseBits(given[static_cast<std::size_t>(k - 1)]));
        if (y.back().size() != static_cast<std::size_t>(k)) throw ConfigError("branch pattern k must have k bits");
      } else {
        y.emplace_back(static_cast<std::size_t>(k), true);
      }
    }
    return vcl_adversary_dist(*h.gen, tree, y, schedule);
  }
  if (name == "erm_failure") {
    const auto* cls = dynamic_cast<const ErmFailureClass*>(h.gen.get());
    if (!cls) throw ConstructionError("erm_failure needs the erm_failure class");
    return erm_failure_dist(*cls, ScheduleFrom(spec));
  }
  throw ConfigError("unknown construction \"" + name + "\"");
}

LearnerKind parse_learner(const std::string& name) {
  if (name == "exp") return LearnerKind::kExp;
  if (name == "lin") return LearnerKind::kLin;
  if (name == "erm") return LearnerKind::kErm;
  if (name == "adversarial_erm") return LearnerKind::kAdversarialErm;
  if (name == "online_as_batch") return LearnerKind::kOnlineAsBatch;
  throw ConfigError("unknown learner \"" + name + "\"");
}

std::string to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::kExp:
      return "exp";
    case LearnerKind::kLin:
      return "lin";
    case LearnerKind::kErm:
      return "erm";
    case LearnerKind::kAdversarialErm:
      return "adversarial_erm";
    case LearnerKind::kOnlineAsBatch:
      return "online_as_batch";
  }
  return {};
}

Classifier train(LearnerKind learner, const ClassHandle& h, std::span<const LabeledPoint> sample) {
  auto solver = [&] {
    if (!h.solver) throw ConstructionError(to_string(learner) + " needs an expandable class");
    return h.solver;
  };
  switch (learner) {
    case LearnerKind::kExp:
      return exp_learner(solver(), sample);
    case LearnerKind::kLin:
      return lin_learner(solver(), sample);
    case LearnerKind::kOnlineAsBatch:
      return online_as_batch(solver(), sample);
    case LearnerKind::kErm:
      return h.cls ? erm_learner(*h.cls, sample) : erm_learner(*h.gen, sample);
    case LearnerKind::kAdversarialErm: {
      const auto* cls = dynamic_cast<const ErmFailureClass*>(h.gen.get());
      if (!cls) throw ConstructionError("adversarial_erm runs only on the erm_failure class");
      return adversarial_erm(*cls, sample);
    }
  }
  throw UsageError("unknown learner");
}

ExperimentSpec parse_experiment(const Json& spec) {
  ExperimentSpec e;
  e.class_spec = Require<Json>(spec, "class");
  e.distribution_spec = Require<Json>(spec, "distribution");
  e.learner = parse_learner(Require<std::string>(spec, "learner"));
  e.n_grid = Require<std::vector<std::size_t>>(spec, "n_grid");
  e.seeds = Get<std::size_t>(spec, "seeds", 1);
  e.root_seed = Get<std::uint64_t>(spec, "root_seed", 0);
  e.out = Get<std::string>(spec, "out", "");
  if (e.n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t i = 1; i < e.n_grid.size(); ++i) {
    if (e.n_grid[i] <= e.n_grid[i - 1]) throw ConfigError("n_grid must be strictly increasing");
  }
  if (e.seeds < 1) throw ConfigError("seeds must be at least 1");
  return e;
}

// ------------------------------------------------------------------ curves

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::size_t n, std::size_t index) {
  return SplitMix64(SplitMix64(root ^ SplitMix64(n)) + index);
}

LearningCurve run_curve(const ClassHandle& h, const RealizableDistribution& dist, LearnerKind learner,
                        const std::vector<std::size_t>& n_grid, std::size_t seeds, std::uint64_t root_seed,
                        std::size_t jobs) {
  if (seeds < 1) throw ConfigError("seeds must be at least 1");
  if (!(dist.domain() == h.gen->domain())) throw DomainError("distribution and class domains differ");
  const Sampler sampler(dist);
  const std::size_t tasks = n_grid.size() * seeds;
  std::vector<double> errors(tasks, 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
      try {
        const std::size_t n = n_grid[t / seeds];
        const Sample sample = sampler.draw(n, derive_seed(root_seed, n, t % seeds));
        errors[t] = exact_error(train(learner, h, sample), dist);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = tasks;
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, tasks));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(work);
  work();
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  LearningCurve curve;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    CurvePoint c;
    c.n = n_grid[g];
    c.seeds = seeds;
    double sum = 0.0;
    std::size_t nonzero = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
      sum += errors[g * seeds + s];
      nonzero += errors[g * seeds + s] > 0.0 ? 1 : 0;
    }
    c.mean_err = sum / static_cast<double>(seeds);
    c.p_nonzero = static_cast<double>(nonzero) / static_cast<double>(seeds);
    if (seeds > 1) {
      double ss = 0.0;
      for (std::size_t s = 0; s < seeds; ++s) ss += std::pow(errors[g * seeds + s] - c.mean_err, 2);
      c.stderr_err = std::sqrt(ss / static_cast<double>(seeds - 1)) / std::sqrt(static_cast<double>(seeds));
    }
    curve.push_back(c);
  }
  return curve;
}

LearningCurve run_experiment(const ExperimentSpec& spec, std::size_t jobs) {
  const ClassHandle h = parse_class(spec.class_spec);
  const RealizableDistribution dist = parse_distribution(spec.distribution_spec, h);
  return run_curve(h, dist, spec.learner, spec.n_grid, spec.seeds, spec.root_seed, jobs);
}

void write_curve_csv(std::ostream& os, const LearningCurve& curve) {
  os << "n,mean_err,p_nonzero,stderr,seeds\n";
  char buf[160];
  for (const CurvePoint& c : curve) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%zu\n", c.n, c.mean_err, c.p_nonzero, c.stderr_err, c.seeds);
    os << buf;
  }
}

LearningCurve read_curve_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("n,mean_err,p_nonzero,stderr,seeds", 0) != 0) {
    throw ConfigError("curve CSV must start with the header n,mean_err,p_nonzero,stderr,seeds");
  }
  LearningCurve curve;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw ConfigError("curve CSV rows have five columns");
    try {
      curve.push_back({std::stoul(cells[0]), std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3]),
                       std::stoul(cells[4])});
    } catch (const std::logic_error&) {
      throw ConfigError("bad curve CSV row: " + line);
    }
  }
  return curve;
}

// -------------------------------------------------------------------- fits

namespace {

LineFit LeastSquares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  if (syy > 1e-300) {
    double res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) res += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
    f.r2 = 1.0 - res / syy;
  }
  return f;
}

}  // namespace

FitResult fit_rate(const LearningCurve& curve, Metric metric) {
  if (curve.size() < 4) throw UsageError("fitting needs at least 4 grid points");
  FitResult fit;
  fit.metric = metric;
  std::vector<double> v;
  for (const CurvePoint& c : curve) v.push_back(metric == Metric::kMean ? c.mean_err : c.p_nonzero);
  if (std::all_of(v.begin(), v.end(), [](double x) { return x <= 0.0; })) {
    fit.model = "exponential";
    fit.degenerate = true;
    fit.exponential.r2 = 1.0;
    for (std::size_t i = 0; i < curve.size(); ++i) fit.floored.push_back(i);
    return fit;
  }
  std::vector<double> n, logn, logv;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double value = v[i];
    if (value <= 0.0) {
      value = 0.5 / static_cast<double>(std::max<std::size_t>(1, curve[i].seeds));
      fit.floored.push_back(i);
    }
    n.push_back(static_cast<double>(curve[i].n));
    logn.push_back(std::log(static_cast<double>(curve[i].n)));
    logv.push_back(std::log(value));
  }
  fit.exponential = LeastSquares(n, logv);
  fit.linear = LeastSquares(logn, logv);
  const LineFit& best = fit.exponential.r2 >= fit.linear.r2 ? fit.exponential : fit.linear;
  if (best.r2 < 0.6 || best.slope >= 0.0) {
    fit.model = "neither";
  } else {
    fit.model = &best == &fit.exponential ? "exponential" : "linear";
  }
  return fit;
}

Json to_json(const FitResult& fit) {
  auto line = [](const LineFit& f) { return Json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}}; };
  return Json{{"model", fit.model},
              {"metric", fit.metric == Metric::kMean ? "mean" : "nonzero"},
              {"exponential", line(fit.exponential)},
              {"linear", line(fit.linear)},
              {"degenerate", fit.degenerate},
              {"floored", fit.floored}};
}

Json to_json(const LearningCurve& curve) {
  Json out = Json::array();
  for (const CurvePoint& c : curve) {
    out.push_back({{"n", c.n}, {"mean_err", c.mean_err}, {"p_nonzero", c.p_nonzero}, {"stderr", c.stderr_err},
                   {"seeds", c.seeds}});
  }
  return out;
}

// ---------------------------------------------------------------- verdicts

VerdictReport trichotomy_report(const Json& class_spec, SearchCaps caps) {
  const ClassHandle h = parse_class(class_spec);
  VerdictReport r;
  r.family = h.gen->family();
  if (auto v = h.gen->structural_verdict()) {
    r.verdict = *v;
    r.structural = true;
    r.reason = h.gen->structural_reason();
  } else {
    r.verdict = Verdict::kExponential;
    r.reason = "finite class: no infinite Littlestone tree";
  }
  if (h.cls) {
    r.littlestone = littlestone_dimension(*h.cls, caps.littlestone);
    r.vc = vc_dimension(*h.cls, caps.vcl);
    try {
      r.vcl = vcl_dimension(*h.cls, caps.vcl, caps.budget);
    } catch (const BudgetError&) {
    }
  }
  return r;
}

Json to_json(const VerdictReport& r) {
  auto capped = [](const std::optional<Capped>& c) -> Json {
    if (!c) return nullptr;
    return Json{{"value", c->value}, {"at_least", c->at_least}};
  };
  return Json{{"family", r.family},
              {"trichotomy_verdict", to_string(r.verdict)},
              {"structural", r.structural},
              {"reason", r.reason},
              {"ld", capped(r.littlestone)},
              {"vcl_depth_evidence", capped(r.vcl)},
              {"vc", capped(r.vc)}};
}

}  // namespace ulearn
