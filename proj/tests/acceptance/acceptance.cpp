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

#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "ulearn/distributions.hpp"
#include "ulearn/harness.hpp"
#include "ulearn/learners.hpp"
#include "ulearn/online.hpp"
#include "ulearn/patterns.hpp"
#include "ulearn/rates.hpp"
#include "ulearn/trees.hpp"

namespace ulearn::acceptance {

namespace {

std::string Fmt(const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

std::shared_ptr<const GameSolver> SolverOf(const oracle::Rows& rows, std::size_t m) {
  return std::make_shared<const GameSolver>(std::make_shared<const ConceptClass>(oracle::class_of(rows, m)));
}

// ---------------------------------------------------------------- 1

// A forbidden-pattern function given by a random table over ordered tuples.
ForbiddenFn RandomTable(std::mt19937_64& rng, std::size_t arity) {
  auto table = std::make_shared<std::map<std::vector<Point>, BitVector>>();
  auto seed = rng();
  return ForbiddenFn{arity, [table, seed, arity](std::span<const Point> z) {
                       std::vector<Point> key(z.begin(), z.end());
                       auto it = table->find(key);
                       if (it != table->end()) return it->second;
                       std::uint64_t h = seed;
                       for (Point p : key) h = h * 0x100000001b3ULL ^ (p + 0x9e37U);
                       std::mt19937_64 local(h);
                       BitVector b(arity);
                       for (std::size_t i = 0; i < arity; ++i) b.set(i, local() & 1U);
                       return table->emplace(key, b).first->second;
                     }};
}

CriterionResult OneInclusionBound() {
  CriterionResult r{1, "one-inclusion permutation bound (exact leave-one-out < t/n)"};
  std::mt19937_64 rng(20261016);
  std::size_t fixtures = 0, checked_patterns = 0, oracle_mismatch = 0, violations = 0, avoider_fixtures = 0;
  double worst = 0.0;  // max over fixtures of (LOO mistakes) / t
  std::size_t attempts = 0;
  while (fixtures < 240 && attempts < 5000) {
    ++attempts;
    ForbiddenFn g;
    std::size_t m;
    const bool from_avoider = attempts % 2 == 1;
    if (from_avoider) {
      m = 3 + rng() % 4;
      const std::size_t size = 2 + rng() % std::min<std::size_t>(23, (std::size_t{1} << m) - 1);
      const oracle::Rows rows = oracle::random_class(rng, m, size);
      auto solver = SolverOf(rows, m);
      PatternAvoider av(solver);
      const oracle::Row& target = rows[rng() % rows.size()];
      const std::size_t len = rng() % 40;
      for (std::size_t s = 0; s < len; ++s) {
        const Point x = static_cast<Point>(rng() % m);
        av.observe(x, static_cast<Label>(target[x]));
      }
      g = av.as_function();
    } else {
      m = 2 + rng() % 4;
      g = RandomTable(rng, 1 + rng() % 3);
    }
    const std::size_t t = g.arity;
    if (t > 8) continue;
    const std::size_t n = t + rng() % (9 - t);
    std::vector<Point> points(n);
    for (Point& p : points) p = static_cast<Point>(rng() % m);
    const PatternSet f = build_pattern_class(points, g);
    if (f.empty()) continue;
    ++fixtures;
    avoider_fixtures += from_avoider ? 1 : 0;
    // Independent enumeration of the same class.
    const oracle::Rows want = oracle::pattern_class(
        points,
        [&g](const std::vector<Point>& z) {
          const BitVector b = g(z);
          oracle::Row row(b.size());
          for (std::size_t i = 0; i < b.size(); ++i) row[i] = b.test(i) ? 1 : 0;
          return row;
        },
        t);
    if (want.size() != f.size()) ++oracle_mismatch;
    const OneInclusionGraph graph = orient(OneInclusionGraph(f));
    for (const BitVector& truth : f) {
      std::size_t mistakes = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<CoordLabel> labeled;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) labeled.push_back({j, static_cast<Label>(truth.test(j) ? 1 : 0)});
        }
        if (one_inclusion_predict(graph, labeled, i) != (truth.test(i) ? 1 : 0)) ++mistakes;
      }
      ++checked_patterns;
      // LOO fraction mistakes / n < t / n.
      if (mistakes >= t) ++violations;
      worst = std::max(worst, static_cast<double>(mistakes) / static_cast<double>(t));
    }
  }
  r.passed = fixtures >= 200 && violations == 0 && oracle_mismatch == 0;
  std::ostringstream os;
  os << fixtures << " fixtures (" << avoider_fixtures << " from trained avoiders), " << checked_patterns
     << " true patterns, violations " << violations << ", pattern-class oracle mismatches " << oracle_mismatch
     << ", worst LOO/(t/n) " << Fmt("%.3f", worst);
  r.detail = os.str();
  r.limit_seconds = 60;
  return r;
}

// ---------------------------------------------------------------- 2

CriterionResult MistakeBound() {
  CriterionResult r{2, "online mistake bound (mistakes <= LD)"};
  std::size_t classes = 0, violations = 0, tight = 0;
  auto check = [&](const oracle::Rows& rows, std::size_t m) {
    const OnlineLearner learner(SolverOf(rows, m));
    std::map<std::pair<std::vector<int>, std::uint64_t>, int> memo;
    const std::function<std::vector<int>(const OnlineLearner&)> key = [](const OnlineLearner& l) {
      std::vector<int> k;
      for (const Constraint& c : l.prefix()) k.push_back(static_cast<int>(2 * c.point + c.label));
      return k;
    };
    const std::uint64_t all = rows.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows.size()) - 1;
    const int worst = oracle::worst_case_mistakes(learner, rows, all, m, key, memo);
    const int ld = oracle::littlestone(rows, m);
    ++classes;
    if (worst > ld) ++violations;
    if (worst == ld) ++tight;
  };
  // Every nonempty class on at most 4 points.
  for (std::size_t m = 1; m <= 4; ++m) {
    const std::size_t patterns = std::size_t{1} << m;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << patterns); ++mask) {
      oracle::Rows rows;
      for (std::size_t code = 0; code < patterns; ++code) {
        if (!(mask >> code & 1U)) continue;
        oracle::Row row(m);
        for (std::size_t x = 0; x < m; ++x) row[x] = static_cast<int>(code >> x & 1U);
        rows.push_back(row);
      }
      check(rows, m);
    }
  }
  const std::size_t exhaustive = classes;
  // Five points: 2^32 classes, so a seeded random sample.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 3000; ++i) check(oracle::random_class(rng, 5, 1 + rng() % 32), 5);
  const std::size_t sampled = classes - exhaustive;
  // Tree adversary on thresholds {1..2^d}.
  std::size_t tree_ok = 0;
  for (int d = 1; d <= 6; ++d) {
    const std::size_t mpts = std::size_t{1} << d;
    auto cls = std::make_shared<const ConceptClass>(Thresholds(mpts).expand());
    auto solver = std::make_shared<const GameSolver>(cls);
    const int ld = oracle::littlestone(oracle::rows_of(*cls), mpts);
    auto tree = find_littlestone_tree(*solver, ld);
    if (!tree) continue;
    std::size_t mistakes = 0;
    for (const DuelRound& round : duel(OnlineLearner(solver), TreeAdversary(*tree))) mistakes += round.mistake ? 1 : 0;
    if (ld == d && static_cast<int>(mistakes) <= ld && static_cast<int>(mistakes) == d) ++tree_ok;
  }
  r.passed = violations == 0 && tree_ok == 6;
  std::ostringstream os;
  os << exhaustive << " classes exhaustive (|domain| <= 4), " << sampled << " sampled at |domain| = 5, violations "
     << violations << ", adversary forces exactly LD on " << tight << "/" << classes << "; thresholds 2^d, d=1..6: "
     << tree_ok << "/6 duels with mistakes = d = LD";
  r.detail = os.str();
  r.limit_seconds = 60;
  return r;
}

// ---------------------------------------------------------------- 3

CriterionResult ExponentialLowerBound() {
  CriterionResult r{3, "exponential lower bound 2^(-n-2) by exact enumeration"};
  auto cls = std::make_shared<const ConceptClass>(ConceptClass::FromStrings({"00", "01", "11"}));
  auto solver = std::make_shared<const GameSolver>(cls);
  const LowerBoundPair pair = exp_lower_bound_pair(*cls);
  bool ok = true;
  std::ostringstream os;
  double min_ratio = 1e300;
  for (std::size_t n = 1; n <= 10; ++n) {
    Rational total = 0;
    for (int i = 0; i < 2; ++i) {
      const RealizableDistribution& dist = i == 0 ? pair.p0 : pair.p1;
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
        Sample s;
        for (std::size_t j = 0; j < n; ++j) {
          if (code >> j & 1U) {
            s.push_back({pair.x_prime, static_cast<Label>(i)});
          } else {
            s.push_back({pair.x, pair.y});
          }
        }
        total += exact_error_rational(exp_learner(solver, s), dist);
      }
    }
    // Average over the two distributions and the 2^n equiprobable samples.
    const Rational avg = total * Rational(1, HyperInt::Pow2(HyperInt(static_cast<std::int64_t>(n + 1))));
    const Rational bound(1, HyperInt::Pow2(HyperInt(static_cast<std::int64_t>(n + 2))));
    if (avg < bound) ok = false;
    min_ratio = std::min(min_ratio, (avg / bound).to_double());
    if (n == 10) os << "n=10: average " << avg.to_string() << " vs bound " << bound.to_string() << "; ";
  }
  os << "min average/bound over n=1..10 is " << Fmt("%.3f", min_ratio);
  r.passed = ok;
  r.detail = os.str();
  r.limit_seconds = 30;
  return r;
}

// ---------------------------------------------------------------- 4

CriterionResult ExponentialCurves(std::size_t jobs) {
  CriterionResult r{4, "exponential regime curves (P{er>0} log-fit R^2 >= 0.8, final <= 0.02)"};
  const std::vector<std::size_t> grid{50, 100, 150, 200, 250, 300, 350, 400};
  struct Fixture {
    const char* name;
    const char* cls;
    const char* dist;
  };
  const Fixture fixtures[] = {
      {"two-point lower-bound pair P0", R"({"matrix":["00","01","11"]})",
       R"({"construction":"lower_bound_pair","which":0})"},
      {"disjoint powerset, 3 blocks, geometric masses", R"({"generator":"disjoint_powerset","params":{"blocks":3}})",
       R"({"construction":"explicit","atoms":[[0,0,"1/2"],[1,0,"1/4"],[2,0,"1/8"],[3,1,"1/16"],[4,0,"1/32"],[5,1,"1/32"]]})"},
  };
  bool ok = true;
  std::ostringstream os;
  for (const Fixture& f : fixtures) {
    const ClassHandle h = parse_class(Json::parse(f.cls));
    const RealizableDistribution dist = parse_distribution(Json::parse(f.dist), h);
    const LearningCurve curve = run_curve(h, dist, LearnerKind::kExp, grid, 500, 4, jobs);
    const FitResult fit = fit_rate(curve, Metric::kNonzero);
    const double last = curve.back().p_nonzero;
    const bool pass = fit.model == "exponential" && fit.exponential.r2 >= 0.8 && last <= 0.02;
    ok = ok && pass;
    os << f.name << ": ";
    if (fit.degenerate) {
      os << "P{er>0} = 0 at every n (degenerate exponential fit)";
    } else {
      os << "P{er>0} " << Fmt("%.3f", curve.front().p_nonzero) << " -> " << Fmt("%.3f", last) << ", R^2 "
         << Fmt("%.3f", fit.exponential.r2) << ", slope " << Fmt("%.4f", fit.exponential.slope);
    }
    os << (pass ? "" : " [FAIL]") << "; ";
  }
  r.passed = ok;
  r.detail = os.str();
  r.limit_seconds = 300;
  return r;
}

// ---------------------------------------------------------------- 5

CriterionResult LinearCurve(std::size_t jobs) {
  CriterionResult r{5, "linear regime curve (log-log slope in [-1.4, -0.6])"};
  const ClassHandle h = parse_class(Json::parse(R"({"generator":"thresholds","params":{"M":64}})"));
  const RealizableDistribution dist = parse_distribution(Json::parse(R"({"construction":"uniform_target"})"), h);
  const LearningCurve curve = run_curve(h, dist, LearnerKind::kLin, {32, 64, 128, 256}, 500, 5, jobs);
  const FitResult fit = fit_rate(curve, Metric::kMean);
  r.passed = fit.linear.slope >= -1.4 && fit.linear.slope <= -0.6;
  std::ostringstream os;
  os << "mean error";
  for (const CurvePoint& c : curve) os << " " << c.n << ":" << Fmt("%.5f", c.mean_err);
  os << "; slope " << Fmt("%.3f", fit.linear.slope) << " (R^2 " << Fmt("%.3f", fit.linear.r2) << ")";
  r.detail = os.str();
  r.limit_seconds = 600;
  return r;
}

// ---------------------------------------------------------------- 6

CriterionResult ScheduleInvariants() {
  CriterionResult r{6, "slow-rate schedule invariants (tail, ratio, proportional mass, 1/2 <= C <= 1)"};
  const RateFunction rates[] = {
      RateFunction::InverseLog(), RateFunction::Power(2),
      RateFunction::Tabulated({{1, Rational(1)}, {4, Rational(1, 2)}, {16, Rational(1, 4)}, {64, Rational(1, 8)}})};
  bool ok = true;
  std::ostringstream os;
  for (const RateFunction& rate : rates) {
    const SlowRateSchedule s = build_slow_schedule(rate, 6);
    const ScheduleCheck c = check_schedule(s);
    ok = ok && c.ok();
    os << rate.name() << ": " << (c.ok() ? "ok" : "FAILED") << ", C ~ " << Fmt("%.4f", s.c.to_double())
       << ", n_6 = " << s.n.back().to_string() << "; ";
    for (const std::string& f : c.failures) os << "[" << f << "] ";
  }
  r.passed = ok;
  r.detail = os.str();
  r.limit_seconds = 10;
  return r;
}

// ---------------------------------------------------------------- 7

CriterionResult ErmFailure(std::size_t jobs) {
  CriterionResult r{7, "ERM failure (mean error >= R(n_1) at the first scheduled n)"};
  const RateFunction rate = RateFunction::Power(2);
  const ErmSchedule schedule = erm_failure_schedule(rate, 3);
  ClassHandle h;
  h.gen = std::make_shared<ErmFailureClass>(erm_failure_class(schedule));
  const auto& cls = static_cast<const ErmFailureClass&>(*h.gen);
  const RealizableDistribution dist = erm_failure_dist(cls, schedule);
  const std::size_t n = schedule.n.front();
  const LearningCurve curve = run_curve(h, dist, LearnerKind::kAdversarialErm, {n}, 500, 7, jobs);
  const double target = rate(static_cast<double>(n));
  r.passed = curve.front().mean_err >= target;
  std::ostringstream os;
  os << "blocks 2^i for i =";
  for (unsigned i : schedule.exponents) os << " " << i;
  os << "; n_1 = " << n << ", mean error " << Fmt("%.4f", curve.front().mean_err) << " vs R(n_1) = "
     << Fmt("%.4f", target) << " (500 seeds)";
  r.detail = os.str();
  r.limit_seconds = 120;
  return r;
}

// ---------------------------------------------------------------- 8

CriterionResult Verdicts() {
  CriterionResult r{8, "trichotomy verdict fixtures"};
  struct Case {
    const char* spec;
    Verdict want;
  };
  const Case cases[] = {
      {R"({"generator":"disjoint_powerset","params":{"blocks":3}})", Verdict::kExponential},
      {R"({"generator":"real_thresholds","params":{"levels":3}})", Verdict::kLinear},
      {R"({"generator":"tree_structured","params":{"depth":3}})", Verdict::kArbitrarilySlow},
  };
  bool ok = true;
  std::ostringstream os;
  for (const Case& c : cases) {
    const VerdictReport v = trichotomy_report(Json::parse(c.spec));
    ok = ok && v.verdict == c.want;
    os << v.family << " -> " << to_string(v.verdict) << "; ";
  }
  r.passed = ok;
  r.detail = os.str();
  r.limit_seconds = 5;
  return r;
}

// ---------------------------------------------------------------- 9

CriterionResult OracleEquivalence() {
  CriterionResult r{9, "Littlestone and VC dimension match naive oracles"};
  std::size_t classes = 0, ld_bad = 0, vc_bad = 0;
  auto check = [&](const oracle::Rows& rows, std::size_t m) {
    const ConceptClass cls = oracle::class_of(rows, m);
    ++classes;
    if (littlestone_dimension(cls, 64).value != oracle::littlestone(rows, m)) ++ld_bad;
    if (vc_dimension(cls, 64).value != oracle::vc(rows, m)) ++vc_bad;
  };
  for (std::size_t m = 1; m <= 4; ++m) {
    const std::size_t patterns = std::size_t{1} << m;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << patterns); ++mask) {
      oracle::Rows rows;
      for (std::size_t code = 0; code < patterns; ++code) {
        if (!(mask >> code & 1U)) continue;
        oracle::Row row(m);
        for (std::size_t x = 0; x < m; ++x) row[x] = static_cast<int>(code >> x & 1U);
        rows.push_back(row);
      }
      check(rows, m);
    }
  }
  const std::size_t exhaustive = classes;
  std::mt19937_64 rng(9);
  for (int i = 0; i < 3000; ++i) {
    const std::size_t m = 5 + rng() % 4;
    check(oracle::random_class(rng, m, 1 + rng() % 64), m);
  }
  r.passed = ld_bad == 0 && vc_bad == 0;
  std::ostringstream os;
  os << exhaustive << " classes exhaustive (|domain| <= 4) + " << classes - exhaustive
     << " random (|domain| 5..8, |class| <= 64); LD mismatches " << ld_bad << ", VC mismatches " << vc_bad;
  r.detail = os.str();
  r.limit_seconds = 120;
  return r;
}

}  // namespace

std::vector<CriterionResult> run_all(const Options& options) {
  using Clock = std::chrono::steady_clock;
  const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
  const std::vector<std::function<CriterionResult()>> criteria{
      OneInclusionBound,
      MistakeBound,
      ExponentialLowerBound,
      [jobs] { return ExponentialCurves(jobs); },
      [jobs] { return LinearCurve(jobs); },
      ScheduleInvariants,
      [jobs] { return ErmFailure(jobs); },
      Verdicts,
      OracleEquivalence,
  };
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
      continue;
    }
    const auto start = Clock::now();
    CriterionResult r;
    try {
      r = criteria[i]();
    } catch (const std::exception& e) {
      r.id = id;
      r.title = "criterion " + std::to_string(id);
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (r.limit_seconds > 0 && r.seconds > r.limit_seconds) {
      r.passed = false;
      r.detail += "; exceeded the " + Fmt("%.0f", r.limit_seconds) + " s limit";
    }
    if (options.on_result) options.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return std::string(r.passed ? "PASS" : "FAIL") + "  [" + std::to_string(r.id) + "] " + r.title + ": " + r.detail +
         " (" + Fmt("%.1f", r.seconds) + " s)";
}

}  // namespace ulearn::acceptance
