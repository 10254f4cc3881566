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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ulearn/errors.hpp"
#include "ulearn/harness.hpp"

namespace ulearn {
namespace {

LearningCurve Synthetic(const std::vector<std::size_t>& grid, double (*f)(double)) {
  LearningCurve c;
  for (std::size_t n : grid) c.push_back({n, f(static_cast<double>(n)), f(static_cast<double>(n)), 0.0, 100});
  return c;
}

TEST(Fit, SyntheticExponential) {
  const FitResult fit = fit_rate(Synthetic({5, 10, 15, 20, 25, 30}, [](double n) { return std::exp(-0.3 * n); }));
  EXPECT_EQ(fit.model, "exponential");
  EXPECT_NEAR(fit.exponential.slope, -0.3, 0.05);
}

TEST(Fit, SyntheticLinear) {
  const FitResult fit = fit_rate(Synthetic({10, 20, 40, 80, 160, 320}, [](double n) { return 2.0 / n; }));
  EXPECT_EQ(fit.model, "linear");
  EXPECT_NEAR(fit.linear.slope, -1.0, 0.1);
}

TEST(Fit, ConstantIsNeither) {
  EXPECT_EQ(fit_rate(Synthetic({10, 20, 30, 40}, [](double) { return 0.2; })).model, "neither");
}

TEST(Fit, AllZeroIsDegenerateExponential) {
  const FitResult fit = fit_rate(Synthetic({10, 20, 30, 40}, [](double) { return 0.0; }));
  EXPECT_EQ(fit.model, "exponential");
  EXPECT_TRUE(fit.degenerate);
}

TEST(Fit, ZeroCellsAreFlooredAndFlagged) {
  LearningCurve c = Synthetic({10, 20, 40, 80}, [](double n) { return 1.0 / n; });
  c[3].mean_err = 0.0;
  const FitResult fit = fit_rate(c);
  EXPECT_EQ(fit.floored, (std::vector<std::size_t>{3}));
  EXPECT_FALSE(fit.degenerate);
}

TEST(Fit, TooFewPoints) {
  EXPECT_THROW(fit_rate(Synthetic({1, 2, 3}, [](double n) { return 1 / n; })), UsageError);
}

TEST(Csv, RoundTripIsExact) {
  const LearningCurve c{{10, 0.1234567890123456789, 0.5, 1e-17, 7}, {20, 1.0 / 3.0, 0.0, 0.25, 7}};
  std::stringstream ss;
  write_curve_csv(ss, c);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "n,mean_err,p_nonzero,stderr,seeds");
  const LearningCurve back = read_curve_csv(ss);
  ASSERT_EQ(back.size(), 2U);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].n, c[i].n);
    EXPECT_EQ(back[i].mean_err, c[i].mean_err);
    EXPECT_EQ(back[i].p_nonzero, c[i].p_nonzero);
    EXPECT_EQ(back[i].stderr_err, c[i].stderr_err);
    EXPECT_EQ(back[i].seeds, c[i].seeds);
  }
  std::stringstream bad("n,mean\n1,2\n");
  EXPECT_THROW(read_curve_csv(bad), ConfigError);
}

Json Experiment() {
  return Json::parse(R"({
    "class": {"generator": "thresholds", "params": {"M": 16}},
    "distribution": {"construction": "uniform_target"},
    "learner": "exp", "n_grid": [8, 16, 32], "seeds": 12, "root_seed": 99})");
}

TEST(Experiment, ReproducibleAcrossJobs) {
  const ExperimentSpec spec = parse_experiment(Experiment());
  std::stringstream a, b;
  write_curve_csv(a, run_experiment(spec, 1));
  write_curve_csv(b, run_experiment(spec, 3));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Experiment, SingletonCurveIsZero) {
  Json e = Experiment();
  e["class"] = Json::parse(R"({"matrix": ["0110"]})");
  e["distribution"] = Json::parse(R"({"construction": "uniform_target", "target": 0})");
  e["seeds"] = 1;
  for (const char* learner : {"exp", "lin", "erm", "online_as_batch"}) {
    e["learner"] = learner;
    for (const CurvePoint& c : run_experiment(parse_experiment(e))) {
      EXPECT_EQ(c.mean_err, 0.0);
      EXPECT_EQ(c.p_nonzero, 0.0);
    }
  }
}

TEST(Experiment, StandardErrorDefinition) {
  const LearningCurve c = run_experiment(parse_experiment(Experiment()));
  for (const CurvePoint& p : c) {
    EXPECT_GE(p.mean_err, 0.0);
    EXPECT_LE(p.mean_err, 1.0);
    EXPECT_GE(p.stderr_err, 0.0);
    EXPECT_EQ(p.seeds, 12U);
  }
}

TEST(Experiment, SeedsExtendRatherThanReshuffle) {
  EXPECT_EQ(derive_seed(1, 10, 3), derive_seed(1, 10, 3));
  EXPECT_NE(derive_seed(1, 10, 3), derive_seed(1, 10, 4));
  EXPECT_NE(derive_seed(1, 10, 3), derive_seed(1, 11, 3));
  EXPECT_NE(derive_seed(1, 10, 3), derive_seed(2, 10, 3));
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_class(Json::parse(R"({"generator": "nope"})")), ConfigError);
  EXPECT_THROW(parse_class(Json::parse(R"({"matrix": ["01", "1"]})")), ConfigError);
  EXPECT_THROW(parse_class(Json::parse(R"({"thing": 1})")), ConfigError);
  EXPECT_THROW(parse_learner("sgd"), ConfigError);
  EXPECT_THROW(parse_rational(Json("1/0")), ConfigError);
  EXPECT_EQ(parse_rational(Json("3/6")), Rational(1, 2));
  Json e = Experiment();
  e["n_grid"] = Json::array({8, 8});
  EXPECT_THROW(parse_experiment(e), ConfigError);
  e = Experiment();
  e["seeds"] = 0;
  EXPECT_THROW(parse_experiment(e), ConfigError);
  const ClassHandle h = parse_class(Json::parse(R"({"generator": "thresholds", "params": {"M": 4}})"));
  EXPECT_THROW(parse_distribution(Json::parse(R"({"construction": "nope"})"), h), ConfigError);
  EXPECT_THROW(parse_distribution(Json::parse(R"({"construction": "explicit", "atoms": [[0, 1, "1/2"], [1, 0, "1/2"]]})"), h),
               RealizabilityError);
}

TEST(Config, LearnerClassMismatchIsConstructionError) {
  const ClassHandle h = parse_class(Json::parse(R"({"generator": "thresholds", "params": {"M": 4}})"));
  const Sample s{{0, 1}};
  EXPECT_THROW(train(LearnerKind::kAdversarialErm, h, s), ConstructionError);
}

TEST(Distributions, ExplicitExactMasses) {
  const ClassHandle h = parse_class(Json::parse(R"({"generator": "thresholds", "params": {"M": 4}})"));
  const RealizableDistribution d =
      parse_distribution(Json::parse(R"({"construction": "explicit", "atoms": [[0, 0, "1/4"], [3, 1, "3/4"]]})"), h);
  ASSERT_TRUE(d.exact_masses().has_value());
  EXPECT_EQ((*d.exact_masses())[1], Rational(3, 4));
}

TEST(Verdict, Fixtures) {
  EXPECT_EQ(trichotomy_report(Json::parse(R"({"generator":"disjoint_powerset","params":{"blocks":3}})")).verdict,
            Verdict::kExponential);
  EXPECT_EQ(trichotomy_report(Json::parse(R"({"generator":"real_thresholds","params":{"levels":3}})")).verdict,
            Verdict::kLinear);
  EXPECT_EQ(trichotomy_report(Json::parse(R"({"generator":"tree_structured","params":{"depth":3}})")).verdict,
            Verdict::kArbitrarilySlow);
  const VerdictReport explicit_class = trichotomy_report(Json::parse(R"({"matrix":["000","100","110","111"]})"));
  EXPECT_EQ(explicit_class.verdict, Verdict::kExponential);
  EXPECT_FALSE(explicit_class.structural);
  EXPECT_EQ(explicit_class.littlestone->value, 2);
  const Json j = to_json(explicit_class);
  EXPECT_EQ(j["trichotomy_verdict"], "exponential");
  EXPECT_EQ(j["ld"]["value"], 2);
}

}  // namespace
}  // namespace ulearn
