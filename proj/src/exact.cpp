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

#include "ulearn/exact.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "ulearn/errors.hpp"

namespace ulearn {

namespace {

using i128 = __int128;

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

bool FitsInt64(i128 v) { return v >= kMin && v <= kMax; }

}  // namespace

// ------------------------------------------------------------------ terms

std::vector<HyperInt::Term> HyperInt::SmallTerms(std::int64_t v, const HyperInt& offset) {
  std::vector<Term> out;
  i128 x = v;
  std::int64_t e = 0;
  while (x != 0) {
    if (x & 1) {
      const int z = ((x % 4) + 4) % 4 == 1 ? 1 : -1;
      out.push_back({z, std::make_shared<const HyperInt>(offset + HyperInt(e))});
      x -= z;
    }
    x /= 2;
    ++e;
  }
  return out;
}

std::vector<HyperInt::Term> HyperInt::AsTerms() const { return is_small() ? SmallTerms(small_, 0) : terms_; }

HyperInt HyperInt::FromDigits(Digits d) {
  std::vector<Term> out;
  while (!d.empty()) {
    auto it = d.begin();
    const HyperInt e = it->first;
    std::int64_t c = it->second;
    d.erase(it);
    if (c == 0) continue;
    const HyperInt e1 = e + 1;
    if (c & 1) {
      std::int64_t next = 0;
      if (auto nx = d.find(e1); nx != d.end()) next = nx->second;
      const std::int64_t r = ((c + 2 * next) % 4 + 4) % 4;
      const int z = r == 1 ? 1 : -1;
      out.push_back({z, std::make_shared<const HyperInt>(e)});
      c -= z;
    }
    if (c != 0) d[e1] += c / 2;
  }
  return FromTerms(std::move(out));
}

HyperInt HyperInt::FromTerms(std::vector<Term> terms) {
  HyperInt h;
  if (terms.empty()) return h;
  bool small = true;
  for (const Term& t : terms) {
    if (!t.exp->is_small() || t.exp->small_ > 100) small = false;
  }
  if (small) {
    i128 v = 0;
    for (const Term& t : terms) v += static_cast<i128>(t.sign) * (static_cast<i128>(1) << t.exp->small_);
    if (FitsInt64(v)) return HyperInt(static_cast<std::int64_t>(v));
  }
  h.terms_ = std::move(terms);
  return h;
}

// ------------------------------------------------------------- arithmetic

HyperInt HyperInt::Pow2(const HyperInt& e) { return HyperInt(1).shifted(e); }

int HyperInt::sign() const {
  if (is_small()) return (small_ > 0) - (small_ < 0);
  return terms_.back().sign;
}

std::int64_t HyperInt::to_int64() const {
  if (!is_small()) throw InexactError("integer " + to_string() + " does not fit in 64 bits");
  return small_;
}

HyperInt HyperInt::operator-() const {
  if (is_small()) {
    if (small_ != kMin) return HyperInt(-small_);
    Digits d;
    d[HyperInt(63)] = 1;
    return FromDigits(std::move(d));
  }
  HyperInt h = *this;
  for (Term& t : h.terms_) t.sign = -t.sign;
  return h;
}

HyperInt operator+(const HyperInt& a, const HyperInt& b) {
  if (a.is_small() && b.is_small()) {
    std::int64_t r;
    if (!__builtin_add_overflow(a.small_, b.small_, &r)) return HyperInt(r);
  }
  HyperInt::Digits d;
  for (const auto& t : a.AsTerms()) d[*t.exp] += t.sign;
  for (const auto& t : b.AsTerms()) d[*t.exp] += t.sign;
  return HyperInt::FromDigits(std::move(d));
}

HyperInt operator*(const HyperInt& a, const HyperInt& b) {
  if (a.is_small() && b.is_small()) {
    std::int64_t r;
    if (!__builtin_mul_overflow(a.small_, b.small_, &r)) return HyperInt(r);
  }
  HyperInt::Digits d;
  const auto ta = a.AsTerms();
  const auto tb = b.AsTerms();
  for (const auto& x : ta) {
    for (const auto& y : tb) d[*x.exp + *y.exp] += x.sign * y.sign;
  }
  return HyperInt::FromDigits(std::move(d));
}

HyperInt HyperInt::shifted(const HyperInt& e) const {
  if (e.sign() < 0) throw UsageError("negative shift");
  if (sign() == 0) return HyperInt(0);
  if (is_small() && e.is_small() && e.small_ <= 62) {
    const i128 r = static_cast<i128>(small_) * (static_cast<i128>(1) << e.small_);
    if (FitsInt64(r)) return HyperInt(static_cast<std::int64_t>(r));
  }
  std::vector<Term> terms = AsTerms();
  for (Term& t : terms) t.exp = std::make_shared<const HyperInt>(*t.exp + e);
  return FromTerms(std::move(terms));
}

std::optional<HyperInt> HyperInt::log2_exact() const {
  if (is_small()) {
    if (small_ <= 0 || (small_ & (small_ - 1)) != 0) return std::nullopt;
    return HyperInt(static_cast<std::int64_t>(__builtin_ctzll(static_cast<unsigned long long>(small_))));
  }
  if (terms_.size() == 1 && terms_[0].sign > 0) return *terms_[0].exp;
  return std::nullopt;
}

HyperInt HyperInt::two_adic_valuation() const {
  if (sign() == 0) throw UsageError("valuation of zero");
  if (is_small()) return HyperInt(static_cast<std::int64_t>(__builtin_ctzll(static_cast<unsigned long long>(small_))));
  // The lowest term of a non-adjacent form is ±2^v and every other term is
  // a multiple of 2^(v+2).
  return *terms_.front().exp;
}

int HyperInt::LowSign(const HyperInt& e) const {
  int s = 0;
  for (const Term& t : AsTerms()) {
    if (*t.exp < e) s = t.sign;
  }
  return s;
}

HyperInt HyperInt::floor_shr(const HyperInt& e) const {
  if (e.sign() < 0) throw UsageError("negative shift");
  if (e.sign() == 0) return *this;
  if (is_small() && e.is_small()) {
    if (e.small_ >= 63) return HyperInt(small_ < 0 ? -1 : 0);
    return HyperInt(small_ >> e.small_);
  }
  Digits high;
  for (const Term& t : AsTerms()) {
    if (*t.exp >= e) high[*t.exp - e] += t.sign;
  }
  HyperInt h = FromDigits(std::move(high));
  return LowSign(e) < 0 ? h - 1 : h;
}

HyperInt HyperInt::ceil_shr(const HyperInt& e) const { return -((-*this).floor_shr(e)); }

std::optional<HyperInt> HyperInt::CeilDiv(const HyperInt& a, const HyperInt& b) {
  if (b.sign() <= 0) throw UsageError("division needs a positive divisor");
  if (a.is_small() && b.is_small()) {
    std::int64_t q = a.small_ / b.small_;
    if (a.small_ % b.small_ != 0 && a.small_ > 0) ++q;
    return HyperInt(q);
  }
  if (auto e = b.log2_exact()) return a.ceil_shr(*e);
  if (a == b) return HyperInt(1);
  return std::nullopt;
}

std::optional<HyperInt> HyperInt::ExactDiv(const HyperInt& a, const HyperInt& b) {
  if (b.sign() == 0) throw UsageError("division by zero");
  if (b.sign() < 0) {
    auto q = ExactDiv(a, -b);
    if (q) return -*q;
    return std::nullopt;
  }
  if (a.is_small() && b.is_small()) {
    if (a.small_ % b.small_ != 0) return std::nullopt;
    return HyperInt(a.small_ / b.small_);
  }
  if (auto e = b.log2_exact()) {
    HyperInt f = a.floor_shr(*e);
    if (f.shifted(*e) == a) return f;
    return std::nullopt;
  }
  if (a == b) return HyperInt(1);
  return std::nullopt;
}

// ------------------------------------------------------------- comparison

std::strong_ordering operator<=>(const HyperInt& a, const HyperInt& b) {
  if (a.is_small() && b.is_small()) return a.small_ <=> b.small_;
  const int s = (a - b).sign();
  return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

bool operator==(const HyperInt& a, const HyperInt& b) {
  if (a.is_small() != b.is_small()) return false;
  if (a.is_small()) return a.small_ == b.small_;
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].sign != b.terms_[i].sign || !(*a.terms_[i].exp == *b.terms_[i].exp)) return false;
  }
  return true;
}

// ------------------------------------------------------------- conversion

std::pair<HyperInt, double> HyperInt::log2_parts() const {
  if (is_small()) {
    if (small_ == 0) return {HyperInt(0), -std::numeric_limits<double>::infinity()};
    return {HyperInt(0), std::log2(std::fabs(static_cast<double>(small_)))};
  }
  const Term& top = terms_.back();
  double corr = 1.0;
  for (std::size_t i = terms_.size() - 1; i-- > 0;) {
    const HyperInt gap = *top.exp - *terms_[i].exp;
    if (!gap.is_small() || gap.small_ > 60) break;
    corr += top.sign * terms_[i].sign * std::ldexp(1.0, static_cast<int>(-gap.small_));
  }
  return {*top.exp, std::log2(corr)};
}

double HyperInt::log2_abs() const {
  auto [top, frac] = log2_parts();
  return top.to_double() + frac;
}

double HyperInt::to_double() const {
  if (is_small()) return static_cast<double>(small_);
  const double l = log2_abs();
  if (l > 1100) return sign() * std::numeric_limits<double>::infinity();
  double v = 0;
  for (const Term& t : terms_) v += t.sign * std::ldexp(1.0, static_cast<int>(t.exp->small_));
  return v;
}

std::string HyperInt::to_string() const {
  if (is_small()) return std::to_string(small_);
  auto power = [](const HyperInt& e) -> std::string {
    if (e.sign() == 0) return "1";
    if (e.is_small()) return "2^" + e.to_string();
    return "2^(" + e.to_string() + ")";
  };
  std::string out;
  for (std::size_t i = terms_.size(); i-- > 0;) {
    const Term& t = terms_[i];
    if (i + 1 == terms_.size()) {
      out += (t.sign < 0 ? "-" : "") + power(*t.exp);
    } else {
      out += (t.sign < 0 ? " - " : " + ") + power(*t.exp);
    }
  }
  return out;
}

// --------------------------------------------------------------- Rational

Rational::Rational(HyperInt num, HyperInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.sign() == 0) throw UsageError("zero denominator");
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  Reduce();
}

void Rational::Reduce() {
  if (num_.sign() == 0) {
    den_ = 1;
    return;
  }
  if (num_.is_small() && den_.is_small()) {
    const std::int64_t n = num_.to_int64();
    const std::int64_t d = den_.to_int64();
    if (n == std::numeric_limits<std::int64_t>::min()) return;
    const std::int64_t g = std::gcd(n, d);
    if (g > 1) {
      num_ = n / g;
      den_ = d / g;
    }
    return;
  }
  if (num_ == den_) {
    num_ = 1;
    den_ = 1;
    return;
  }
  // Cancel a common power of two when the denominator is one.
  if (auto b = den_.log2_exact()) {
    HyperInt v = num_.two_adic_valuation();
    if (v > *b) v = *b;
    if (v.sign() > 0) {
      num_ = num_.floor_shr(v);
      den_ = HyperInt::Pow2(*b - v);
    }
  }
}

Rational Rational::reciprocal() const {
  if (num_.sign() == 0) throw UsageError("reciprocal of zero");
  return Rational(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational(a.num_ + b.num_, a.den_);
  auto ea = a.den_.log2_exact();
  auto eb = b.den_.log2_exact();
  if (ea && eb) {
    if (*ea < *eb) return Rational(a.num_.shifted(*eb - *ea) + b.num_, b.den_);
    return Rational(a.num_ + b.num_.shifted(*ea - *eb), a.den_);
  }
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }

Rational operator*(const Rational& a, const Rational& b) { return Rational(a.num_ * b.num_, a.den_ * b.den_); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return a.num_ <=> b.num_;
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

double Rational::to_double() const {
  if (num_.sign() == 0) return 0.0;
  if (num_.is_small() && den_.is_small()) return static_cast<double>(num_.to_int64()) / static_cast<double>(den_.to_int64());
  auto [tn, fn] = num_.log2_parts();
  auto [td, fd] = den_.log2_parts();
  const double l = (tn - td).to_double() + (fn - fd);
  return num_.sign() * std::exp2(l);
}

std::string Rational::to_string() const {
  if (den_ == HyperInt(1)) return num_.to_string();
  auto wrap = [](const HyperInt& h) { return h.is_small() ? h.to_string() : "(" + h.to_string() + ")"; };
  return wrap(num_) + "/" + wrap(den_);
}

}  // namespace ulearn
