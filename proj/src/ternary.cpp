// SPDX-License-Identifier: Apache-2.0
#include "muefix/ternary.hpp"

#include <algorithm>

#include "muefix/common.hpp"

namespace muefix {

TernaryVector TernaryVector::from(std::vector<std::int8_t> entries) {
  TernaryVector v;
  for (const auto e : entries) {
    if (e < -1 || e > 1) throw ValidationError("ternary entries must be -1, 0 or +1");
    v.weight += (e != 0);
  }
  v.entries = std::move(entries);
  return v;
}

bool TernaryVector::is_canonical() const {
  for (const auto e : entries) {
    if (e != 0) return e > 0;
  }
  return true;  // zero vector
}

TernaryVector TernaryVector::canonical() const {
  if (is_canonical()) return *this;
  TernaryVector v = *this;
  for (auto& e : v.entries) e = static_cast<std::int8_t>(-e);
  return v;
}

bool lex_less(const TernaryVector& a, const TernaryVector& b) {
  return std::lexicographical_compare(a.entries.begin(), a.entries.end(), b.entries.begin(),
                                      b.entries.end());
}

TernaryGray::TernaryGray(int size) {
  if (size < 0) throw ValidationError("TernaryGray size must be >= 0");
  digit_.assign(static_cast<std::size_t>(size), 0);
  dir_.assign(static_cast<std::size_t>(size), 1);
  value_.assign(static_cast<std::size_t>(size), 0);
}

namespace {
// Digit order (0, +1, -1) keeps the walk anchored at the all-zero state.
inline std::int8_t digit_value(std::int8_t digit) { return digit == 2 ? -1 : digit; }
}  // namespace

bool TernaryGray::advance(int* coord, int* delta) {
  for (std::size_t i = 0; i < digit_.size(); ++i) {
    const int next = digit_[i] + dir_[i];
    if (next < 0 || next > 2) {
      dir_[i] = static_cast<std::int8_t>(-dir_[i]);
      continue;
    }
    const std::int8_t before = digit_value(digit_[i]);
    digit_[i] = static_cast<std::int8_t>(next);
    value_[i] = digit_value(digit_[i]);
    *coord = static_cast<int>(i);
    *delta = value_[i] - before;
    return true;
  }
  return false;
}

}  // namespace muefix
