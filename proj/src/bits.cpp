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

#include "ulearn/bits.hpp"

#include <algorithm>
#include <stdexcept>

namespace ulearn {

BitVector BitVector::FromString(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bit string may contain only '0' and '1'");
    }
  }
  return v;
}

std::string BitVector::ToString() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

std::size_t BitVector::find_next(std::size_t from) const {
  if (from >= size_) return npos;
  std::size_t w = from / kWordBits;
  Word cur = words_[w] & (~Word{0} << (from % kWordBits));
  while (true) {
    if (cur != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(cur));
    if (++w == words_.size()) return npos;
    cur = words_[w];
  }
}

void BitVector::push_back(bool bit) {
  if (size_ % kWordBits == 0) words_.push_back(0);
  ++size_;
  if (bit) set(size_ - 1);
}

int BitVector::Compare(const BitVector& a, const BitVector& b) {
  const std::size_t n = std::min(a.size_, b.size_);
  const std::size_t full = n / kWordBits;
  auto first_diff = [&](std::size_t i, Word diff) {
    const std::size_t bit = i * kWordBits + static_cast<std::size_t>(std::countr_zero(diff));
    return a.test(bit) ? 1 : -1;
  };
  for (std::size_t i = 0; i < full; ++i) {
    const Word diff = a.words_[i] ^ b.words_[i];
    if (diff != 0) return first_diff(i, diff);
  }
  if (n % kWordBits != 0) {
    const Word mask = (Word{1} << (n % kWordBits)) - 1;
    const Word diff = (a.words_[full] ^ b.words_[full]) & mask;
    if (diff != 0) return first_diff(full, diff);
  }
  if (a.size_ == b.size_) return 0;
  return a.size_ < b.size_ ? -1 : 1;
}

std::size_t BitVector::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
  for (Word w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace ulearn
