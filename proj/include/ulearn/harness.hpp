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

// Experiment plumbing: JSON specs for classes and distributions, seeded
// Monte-Carlo learning curves, log-fits and verdict reports.

#ifndef ULEARN_HARNESS_HPP_
#define ULEARN_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ulearn/distributions.hpp"
#include "ulearn/generators.hpp"
#include "ulearn/learners.hpp"
#include "ulearn/rates.hpp"
#include "ulearn/trees.hpp"

namespace ulearn {

using Json = nlohmann::json;

// A parsed class spec. `cls` and `solver` exist when the class expands.
struct ClassHandle {
  Json spec;
  std::shared_ptr<const Generator> gen;
  std::shared_ptr<const ConceptClass> cls;
  std::shared_ptr<const GameSolver> solver;
};

// {"matrix": ["0101", ...], "points": [...]} or
// {"generator": name, "params": {...}}. ConfigError on bad input.
ClassHandle parse_class(const Json& spec);
std::vector<std::string> generator_names();

// {"kind": "inverse_log"} | {"kind": "power", "root": s} |
// {"kind": "tabulated", "knots": [[1, "1"], [4, "1/2"], ...]}
RateFunction parse_rate(const Json& spec);
Rational parse_rational(const Json& v);

// Constructions: uniform_target, explicit, lower_bound_pair,
// littlestone_adversary, vcl_adversary, erm_failure.
RealizableDistribution parse_distribution(const Json& spec, const ClassHandle& cls);

enum class LearnerKind { kExp, kLin, kErm, kAdversarialErm, kOnlineAsBatch };
LearnerKind parse_learner(const std::string& name);
std::string to_string(LearnerKind k);

// Trains the named learner. ConstructionError when it cannot run on the
// class (no expansion, or adversarial_erm off the ERM-failure family).
Classifier train(LearnerKind learner, const ClassHandle& cls, std::span<const LabeledPoint> sample);

struct ExperimentSpec {
  Json class_spec;
  Json distribution_spec;
  LearnerKind learner = LearnerKind::kExp;
  std::vector<std::size_t> n_grid;
  std::size_t seeds = 1;
  std::uint64_t root_seed = 0;
  std::string out;
};

// Also checks the invariants: strictly increasing grid, seeds >= 1.
ExperimentSpec parse_experiment(const Json& spec);

// Counter-based seed of draw `index` at grid size n: two splitmix64 rounds,
// so raising the seed count only appends draws.
std::uint64_t derive_seed(std::uint64_t root, std::size_t n, std::size_t index);

struct CurvePoint {
  std::size_t n = 0;
  double mean_err = 0.0;
  double p_nonzero = 0.0;
  double stderr_err = 0.0;  // sample std of the errors / sqrt(seeds)
  std::size_t seeds = 0;
};
using LearningCurve = std::vector<CurvePoint>;

// Seed-parallel over `jobs` threads; results do not depend on jobs.
LearningCurve run_experiment(const ExperimentSpec& spec, std::size_t jobs = 1);
// Same on already-parsed objects.
LearningCurve run_curve(const ClassHandle& cls, const RealizableDistribution& dist, LearnerKind learner,
                        const std::vector<std::size_t>& n_grid, std::size_t seeds, std::uint64_t root_seed,
                        std::size_t jobs = 1);

void write_curve_csv(std::ostream& os, const LearningCurve& curve);
LearningCurve read_curve_csv(std::istream& is);

enum class Metric { kMean, kNonzero };

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct FitResult {
  std::string model;  // exponential | linear | neither
  Metric metric = Metric::kMean;
  LineFit exponential;  // log v against n
  LineFit linear;       // log v against log n
  bool degenerate = false;
  std::vector<std::size_t> floored;  // grid indices floored at 0.5 / seeds
};

// Least squares on both log-scales; the better R² wins unless both are
// below 0.6 or the winning slope is not negative. A curve of zeros is
// reported as exponential and degenerate.
FitResult fit_rate(const LearningCurve& curve, Metric metric = Metric::kMean);
Json to_json(const FitResult& fit);
Json to_json(const LearningCurve& curve);

struct VerdictReport {
  std::string family;
  Verdict verdict = Verdict::kExponential;
  bool structural = false;
  std::string reason;
  std::optional<Capped> littlestone;
  std::optional<Capped> vcl;
  std::optional<Capped> vc;
};

struct SearchCaps {
  int littlestone = 16;
  int vcl = 8;
  SearchBudget budget;
};

VerdictReport trichotomy_report(const Json& class_spec, SearchCaps caps = {});
Json to_json(const VerdictReport& report);

}  // namespace ulearn

#endif  // ULEARN_HARNESS_HPP_
