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

// Rate functions and the two sequence constructions driven by them: the
// slow-rate schedule (n_i, k_i, p_{k_i}) and the ERM-failure block schedule.

#ifndef ULEARN_RATES_HPP_
#define ULEARN_RATES_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ulearn/exact.hpp"

namespace ulearn {

// A nonincreasing R : {1, 2, ...} -> (0, 1] with R(1) = 1 and R(n) -> 0.
class RateFunction {
 public:
  enum class Kind { kInverseLog, kPower, kTabulated };

  // R(n) = 1 / (1 + log2 n).
  static RateFunction InverseLog();
  // R(n) = n^(-1/root).
  static RateFunction Power(unsigned root);
  // Step function through knots (n_j, v_j) with n_1 = 1 and positive
  // nonincreasing values; past the last knot R(n) = v_last * n_last / n.
  // Values are rescaled so that R(1) = 1.
  static RateFunction Tabulated(std::vector<std::pair<std::uint64_t, Rational>> knots);

  Kind kind() const { return kind_; }
  std::string name() const;
  double operator()(double n) const;
  // Exact value; InexactError when it is irrational or not computable.
  Rational exact(const HyperInt& n) const;
  // Least n > after with R(n) <= bound (bound > 0). InexactError when the
  // threshold cannot be located exactly.
  HyperInt least_at_most(const Rational& bound, const HyperInt& after) const;

 private:
  Kind kind_ = Kind::kInverseLog;
  unsigned root_ = 1;
  std::vector<std::pair<std::uint64_t, Rational>> knots_;
};

// Truncated sequence of the slow-rate construction, 0-based storage of
// i = 1..i_max. Only the levels k_i carry mass, p_{k_i} = C * R(n_i).
struct SlowRateSchedule {
  RateFunction rate;
  std::size_t i_max = 0;
  std::vector<HyperInt> n;
  std::vector<HyperInt> k;
  std::vector<Rational> r;  // R(n_i)
  std::vector<Rational> p;  // p_{k_i}
  Rational c;
};

// n_1 = k_1 = 1; n_i = least n > n_{i-1} with
// R(n) <= min_{j<i} R(n_j) 2^(j-i) / k_j; k_i = max(ceil(n_i R(n_i)),
// k_{i-1} + 1); C = 1 / Σ_{j <= i_max} R(n_j).
SlowRateSchedule build_slow_schedule(const RateFunction& rate, std::size_t i_max);

struct ScheduleCheck {
  bool recursion = true;  // n_i, k_i follow the defining rule
  bool tail = true;       // Σ_{k > k_i} p_k <= 1 / n_i
  bool ratio = true;      // n_i p_{k_i} <= k_i
  bool proportional = true;  // p_{k_i} = C R(n_i)
  bool c_range = true;       // 1/2 <= C <= 1
  std::vector<std::string> failures;
  bool ok() const { return recursion && tail && ratio && proportional && c_range; }
};

// Re-derives every quantity from the rate function and checks the schedule
// against the defining inequalities in exact arithmetic.
ScheduleCheck check_schedule(const SlowRateSchedule& s);

// Blocks of the ERM-failure construction: exponents i_t, sample sizes n_t
// and block masses p_t = 2^(i_t - 2) / n_t with p_t decreasing, Σ p_t <= 1
// and p_t >= 4 R(n_t).
struct ErmSchedule {
  std::vector<unsigned> exponents;
  std::vector<std::uint64_t> n;
  std::vector<Rational> p;
};

// Greedy: for each t the least exponent i > i_{t-1} for which
// n = max(n_{t-1} + 1, ceil(2^(i-1) / p_{t-1})) (p_0 = 1) satisfies
// p >= 4 R(n) within 1e-12. ConstructionError past max_exponent.
ErmSchedule erm_failure_schedule(const RateFunction& rate, std::size_t count, unsigned max_exponent = 24);

}  // namespace ulearn

#endif  // ULEARN_RATES_HPP_
