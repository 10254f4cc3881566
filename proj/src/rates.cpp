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

#include "ulearn/rates.hpp"

#include <algorithm>
#include <cmath>

#include "ulearn/errors.hpp"

namespace ulearn {

namespace {

HyperInt IntPow(const HyperInt& b, unsigned e) {
  HyperInt out = 1;
  for (unsigned i = 0; i < e; ++i) out = out * b;
  return out;
}

// m with m^root == n, for a machine-size n.
std::optional<std::int64_t> IntegerRoot(std::int64_t n, unsigned root) {
  if (n < 1) return std::nullopt;
  const auto guess = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / root)));
  for (std::int64_t m = std::max<std::int64_t>(1, guess - 1); m <= guess + 1; ++m) {
    __int128 v = 1;
    for (unsigned i = 0; i < root && v <= n; ++i) v *= m;
    if (v == n) return m;
  }
  return std::nullopt;
}

const HyperInt& Max(const HyperInt& a, const HyperInt& b) { return a < b ? b : a; }

}  // namespace

RateFunction RateFunction::InverseLog() { return RateFunction(); }

RateFunction RateFunction::Power(unsigned root) {
  if (root == 0) throw ConfigError("power rate needs a positive root");
  RateFunction r;
  r.kind_ = Kind::kPower;
  r.root_ = root;
  return r;
}

RateFunction RateFunction::Tabulated(std::vector<std::pair<std::uint64_t, Rational>> knots) {
  if (knots.empty() || knots.front().first != 1) throw ConfigError("tabulated rate needs a knot at n = 1");
  for (std::size_t j = 0; j < knots.size(); ++j) {
    if (knots[j].second.sign() <= 0) throw ConfigError("tabulated rate values must be positive");
    if (j > 0 && (knots[j].first <= knots[j - 1].first || knots[j - 1].second < knots[j].second)) {
      throw ConfigError("tabulated rate knots must increase in n with nonincreasing values");
    }
  }
  const Rational scale = knots.front().second;
  for (auto& kv : knots) kv.second = kv.second / scale;
  RateFunction r;
  r.kind_ = Kind::kTabulated;
  r.knots_ = std::move(knots);
  return r;
}

std::string RateFunction::name() const {
  switch (kind_) {
    case Kind::kInverseLog:
      return "1/(1+log2 n)";
    case Kind::kPower:
      return "n^(-1/" + std::to_string(root_) + ")";
    case Kind::kTabulated:
      return "tabulated(" + std::to_string(knots_.size()) + " knots)";
  }
  return {};
}

double RateFunction::operator()(double n) const {
  switch (kind_) {
    case Kind::kInverseLog:
      return 1.0 / (1.0 + std::log2(n));
    case Kind::kPower:
      return std::pow(n, -1.0 / root_);
    case Kind::kTabulated: {
      const auto& last = knots_.back();
      if (n >= static_cast<double>(last.first)) return last.second.to_double() * static_cast<double>(last.first) / n;
      double v = 1.0;
      for (const auto& [x, val] : knots_) {
        if (static_cast<double>(x) <= n) v = val.to_double();
      }
      return v;
    }
  }
  return 0.0;
}

Rational RateFunction::exact(const HyperInt& n) const {
  if (n < HyperInt(1)) throw UsageError("rate functions are defined for n >= 1");
  switch (kind_) {
    case Kind::kInverseLog: {
      auto e = n.log2_exact();
      if (!e) throw InexactError("1/(1+log2 n) is irrational at n = " + n.to_string());
      return Rational(1, *e + 1);
    }
    case Kind::kPower: {
      if (n.is_small()) {
        auto m = IntegerRoot(n.to_int64(), root_);
        if (!m) throw InexactError(name() + " is irrational at n = " + n.to_string());
        return Rational(1, *m);
      }
      auto e = n.log2_exact();
      if (e && e->is_small() && e->to_int64() % root_ == 0) {
        return Rational(1, HyperInt::Pow2(HyperInt(e->to_int64() / root_)));
      }
      throw InexactError(name() + " is not computable exactly at n = " + n.to_string());
    }
    case Kind::kTabulated: {
      const auto& last = knots_.back();
      const HyperInt last_n(static_cast<std::int64_t>(last.first));
      if (n >= last_n) return last.second * Rational(last_n, n);
      Rational v = 1;
      for (const auto& [x, val] : knots_) {
        if (HyperInt(static_cast<std::int64_t>(x)) <= n) v = val;
      }
      return v;
    }
  }
  return 0;
}

HyperInt RateFunction::least_at_most(const Rational& bound, const HyperInt& after) const {
  if (bound.sign() <= 0) throw UsageError("rate bound must be positive");
  const HyperInt first = Max(after + 1, HyperInt(1));
  const HyperInt& p = bound.num();
  const HyperInt& q = bound.den();
  switch (kind_) {
    case Kind::kInverseLog: {
      // 1 / (1 + log2 n) <= p/q  iff  n >= 2^(q/p - 1).
      auto l = HyperInt::ExactDiv(q, p);
      if (!l) throw InexactError("threshold 2^(" + q.to_string() + "/" + p.to_string() + " - 1) is irrational");
      const HyperInt e = Max(*l - 1, HyperInt(0));
      return Max(first, HyperInt::Pow2(e));
    }
    case Kind::kPower: {
      // n^(-1/s) <= p/q  iff  n >= (q/p)^s.
      if (auto b = HyperInt::ExactDiv(q, p)) return Max(first, IntPow(*b, root_));
      auto c = HyperInt::CeilDiv(IntPow(q, root_), IntPow(p, root_));
      if (!c) throw InexactError("power-rate threshold not computable exactly");
      return Max(first, *c);
    }
    case Kind::kTabulated: {
      for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
        if (knots_[j].second > bound) continue;
        const HyperInt start = Max(first, HyperInt(static_cast<std::int64_t>(knots_[j].first)));
        if (start < HyperInt(static_cast<std::int64_t>(knots_[j + 1].first))) return start;
      }
      // Tail: v N / n <= p/q  iff  n >= v N q / p.
      const auto& last = knots_.back();
      const HyperInt last_n(static_cast<std::int64_t>(last.first));
      auto c = HyperInt::CeilDiv(last.second.num() * last_n * q, last.second.den() * p);
      if (!c) throw InexactError("tabulated-rate threshold not computable exactly");
      return Max(Max(first, last_n), *c);
    }
  }
  return first;
}

// ------------------------------------------------------- slow schedule

namespace {

Rational StepBound(const SlowRateSchedule& s, std::size_t i) {
  // min_{j<i} R(n_j) 2^(j-i) / k_j, 0-based i.
  std::optional<Rational> best;
  for (std::size_t j = 0; j < i; ++j) {
    const Rational b(s.r[j].num(), s.r[j].den().shifted(HyperInt(static_cast<std::int64_t>(i - j))) * s.k[j]);
    if (!best || b < *best) best = b;
  }
  return *best;
}

HyperInt CeilOf(const Rational& x) {
  auto c = HyperInt::CeilDiv(x.num(), x.den());
  if (!c) throw InexactError("ceiling of " + x.to_string() + " not computable exactly");
  return *c;
}

}  // namespace

SlowRateSchedule build_slow_schedule(const RateFunction& rate, std::size_t i_max) {
  if (i_max < 1) throw ConfigError("schedule needs i_max >= 1");
  if (rate.exact(1) != Rational(1)) throw ConstructionError("rate must satisfy R(1) = 1");
  SlowRateSchedule s;
  s.rate = rate;
  s.i_max = i_max;
  s.n.push_back(1);
  s.k.push_back(1);
  s.r.push_back(1);
  for (std::size_t i = 1; i < i_max; ++i) {
    const Rational bound = StepBound(s, i);
    HyperInt n = rate.least_at_most(bound, s.n.back());
    Rational r = rate.exact(n);
    HyperInt k = Max(CeilOf(Rational(n) * r), s.k.back() + 1);
    s.n.push_back(std::move(n));
    s.r.push_back(std::move(r));
    s.k.push_back(std::move(k));
  }
  Rational total = 0;
  for (const Rational& r : s.r) total += r;
  s.c = total.reciprocal();
  for (const Rational& r : s.r) s.p.push_back(s.c * r);
  return s;
}

ScheduleCheck check_schedule(const SlowRateSchedule& s) {
  ScheduleCheck out;
  auto fail = [&out](bool& flag, const std::string& what) {
    flag = false;
    out.failures.push_back(what);
  };
  const std::size_t m = s.n.size();
  if (m != s.i_max || s.k.size() != m || s.r.size() != m || s.p.size() != m) {
    fail(out.recursion, "sequence lengths differ from i_max");
    return out;
  }
  std::vector<Rational> r(m);
  for (std::size_t i = 0; i < m; ++i) {
    try {
      r[i] = s.rate.exact(s.n[i]);
    } catch (const InexactError&) {
      fail(out.recursion, "R(n_" + std::to_string(i + 1) + ") has no exact value");
      return out;
    }
  }
  if (!(s.n[0] == HyperInt(1)) || !(s.k[0] == HyperInt(1))) fail(out.recursion, "n_1 = k_1 = 1 violated");
  for (std::size_t i = 1; i < m; ++i) {
    const std::string at = "i = " + std::to_string(i + 1);
    if (!(s.n[i - 1] < s.n[i])) fail(out.recursion, at + ": n_i not increasing");
    std::optional<Rational> bound;
    for (std::size_t j = 0; j < i; ++j) {
      const Rational b = r[j] * Rational(1, HyperInt::Pow2(HyperInt(static_cast<std::int64_t>(i - j))) * s.k[j]);
      if (!bound || b < *bound) bound = b;
    }
    if (r[i] > *bound) fail(out.recursion, at + ": R(n_i) above the bound");
    // Minimality, where the predecessor's rate value is exactly known.
    const HyperInt prev = s.n[i] - 1;
    if (s.n[i - 1] < prev) {
      try {
        if (s.rate.exact(prev) <= *bound) fail(out.recursion, at + ": n_i not least");
      } catch (const InexactError&) {
      }
    }
    auto c = HyperInt::CeilDiv(s.n[i] * r[i].num(), r[i].den());
    const HyperInt want = c ? Max(*c, s.k[i - 1] + 1) : HyperInt(-1);
    if (!c || !(want == s.k[i])) fail(out.recursion, at + ": k_i rule violated");
  }
  Rational total = 0;
  for (const Rational& x : r) total += x;
  const Rational c = total.reciprocal();
  if (c < Rational(1, 2) || c > Rational(1)) fail(out.c_range, "C = " + c.to_string() + " outside [1/2, 1]");
  for (std::size_t i = 0; i < m; ++i) {
    const std::string at = "i = " + std::to_string(i + 1);
    if (!(s.p[i] == c * r[i])) fail(out.proportional, at + ": p_{k_i} != C R(n_i)");
    Rational rest = 0;
    for (std::size_t j = i + 1; j < m; ++j) rest += s.p[j];
    if (rest * Rational(s.n[i]) > Rational(1)) fail(out.tail, at + ": tail mass exceeds 1/n_i");
    if (Rational(s.n[i]) * s.p[i] > Rational(s.k[i])) fail(out.ratio, at + ": n_i p_{k_i} > k_i");
  }
  return out;
}

// -------------------------------------------------------- ERM schedule

ErmSchedule erm_failure_schedule(const RateFunction& rate, std::size_t count, unsigned max_exponent) {
  if (count == 0) throw ConfigError("ERM schedule needs at least one block");
  if (max_exponent > 40) throw ConfigError("ERM schedule exponents are limited to 40");
  ErmSchedule s;
  unsigned i = 1;
  std::uint64_t n_prev = 0;
  Rational p_prev = 1;
  for (std::size_t t = 0; t < count; ++t) {
    bool found = false;
    while (!found) {
      if (++i > max_exponent) throw ConstructionError("no ERM block schedule within the exponent limit");
      const Rational need(HyperInt::Pow2(HyperInt(static_cast<std::int64_t>(i - 1))), 1);
      const std::uint64_t n =
          std::max<std::uint64_t>(n_prev + 1, static_cast<std::uint64_t>(CeilOf(need / p_prev).to_int64()));
      const Rational p(HyperInt::Pow2(HyperInt(static_cast<std::int64_t>(i - 2))), static_cast<std::int64_t>(n));
      if (p.to_double() >= 4.0 * rate(static_cast<double>(n)) - 1e-12) {
        s.exponents.push_back(i);
        s.n.push_back(n);
        s.p.push_back(p);
        n_prev = n;
        p_prev = p;
        found = true;
      }
    }
  }
  return s;
}

}  // namespace ulearn
