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

// Exact integers of tower size and rationals over them.
//
// A HyperInt is either a machine integer or a non-adjacent-form sum
// Σ ±2^e whose exponents are themselves HyperInts, so values such as
// 2^(2^256 - 1) are represented exactly. Addition, multiplication,
// comparison and shifts are exact; general division is only available when
// both operands fit in 64 bits or the divisor is a power of two.

#ifndef ULEARN_EXACT_HPP_
#define ULEARN_EXACT_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ulearn {

class HyperInt {
 public:
  HyperInt() = default;
  HyperInt(std::int64_t v) : small_(v) {}  // NOLINT(google-explicit-constructor)
  HyperInt(int v) : small_(v) {}           // NOLINT(google-explicit-constructor)

  // 2^e for e >= 0.
  static HyperInt Pow2(const HyperInt& e);

  int sign() const;
  bool is_small() const { return terms_.empty(); }
  // Throws InexactError when the value does not fit.
  std::int64_t to_int64() const;

  HyperInt operator-() const;
  friend HyperInt operator+(const HyperInt& a, const HyperInt& b);
  friend HyperInt operator-(const HyperInt& a, const HyperInt& b) { return a + (-b); }
  friend HyperInt operator*(const HyperInt& a, const HyperInt& b);
  HyperInt& operator+=(const HyperInt& b) { return *this = *this + b; }

  // this * 2^e, e >= 0.
  HyperInt shifted(const HyperInt& e) const;
  // e with this == 2^e, if any.
  std::optional<HyperInt> log2_exact() const;
  // Largest v with 2^v | x, for x != 0.
  HyperInt two_adic_valuation() const;
  // floor / ceil of this / 2^e, e >= 0.
  HyperInt floor_shr(const HyperInt& e) const;
  HyperInt ceil_shr(const HyperInt& e) const;
  // ceil(a / b) for b > 0 when computable exactly, else nullopt.
  static std::optional<HyperInt> CeilDiv(const HyperInt& a, const HyperInt& b);
  // Exact quotient when b divides a and the quotient is computable.
  static std::optional<HyperInt> ExactDiv(const HyperInt& a, const HyperInt& b);

  friend std::strong_ordering operator<=>(const HyperInt& a, const HyperInt& b);
  friend bool operator==(const HyperInt& a, const HyperInt& b);

  // log2|x| = top + frac with top the leading exponent and |frac| <= 1.
  // Zero has no logarithm; callers check sign() first.
  std::pair<HyperInt, double> log2_parts() const;
  // log2|x| to double precision (inf for huge exponents, -inf for 0).
  double log2_abs() const;
  double to_double() const;
  // Decimal for machine integers, otherwise "2^e1 - 2^e2 + ...".
  std::string to_string() const;
  std::size_t term_count() const { return terms_.size(); }

 private:
  struct Term {
    int sign;
    std::shared_ptr<const HyperInt> exp;
  };
  using Digits = std::map<HyperInt, std::int64_t>;

  static std::vector<Term> SmallTerms(std::int64_t v, const HyperInt& offset);
  std::vector<Term> AsTerms() const;
  static HyperInt FromDigits(Digits digits);
  static HyperInt FromTerms(std::vector<Term> terms);
  // Sign of Σ over terms with exponent < e.
  int LowSign(const HyperInt& e) const;

  std::int64_t small_ = 0;
  std::vector<Term> terms_;  // non-empty: big value, ascending exponents
};

class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(HyperInt num) : num_(std::move(num)), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num) : num_(num), den_(1) {}         // NOLINT(google-explicit-constructor)
  Rational(int num) : num_(num), den_(1) {}                  // NOLINT(google-explicit-constructor)
  Rational(HyperInt num, HyperInt den);

  const HyperInt& num() const { return num_; }
  const HyperInt& den() const { return den_; }
  int sign() const { return num_.sign(); }

  Rational reciprocal() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.reciprocal(); }
  Rational& operator+=(const Rational& b) { return *this = *this + b; }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) { return (a <=> b) == 0; }

  double to_double() const;
  std::string to_string() const;

 private:
  void Reduce();
  HyperInt num_;
  HyperInt den_;  // > 0
};

}  // namespace ulearn

#endif  // ULEARN_EXACT_HPP_
