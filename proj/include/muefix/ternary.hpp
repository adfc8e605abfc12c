// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace muefix {

// Error vector x in {-1, 0, +1}^K. Canonical form: the first nonzero entry
// is +1, the chosen representative of the {x, -x} pair.
struct TernaryVector {
  std::vector<std::int8_t> entries;
  int weight = 0;

  // Validates entry values and caches the weight.
  static TernaryVector from(std::vector<std::int8_t> entries);

  int size() const { return static_cast<int>(entries.size()); }
  bool is_zero() const { return weight == 0; }
  bool is_canonical() const;
  TernaryVector canonical() const;  // flips sign if needed

  bool operator==(const TernaryVector& other) const { return entries == other.entries; }
};

// Entrywise order with -1 < 0 < +1, index 0 most significant.
bool lex_less(const TernaryVector& a, const TernaryVector& b);

// Enumerates all of {-1,0,+1}^size starting from the all-zero state; each
// advance() changes exactly one coordinate (by +-1 or +-2). Visits 3^size
// states in total, counting the initial one.
class TernaryGray {
 public:
  explicit TernaryGray(int size);

  // Applies the next single-coordinate change; false once exhausted.
  // On success, *coord and *delta describe the change just applied.
  bool advance(int* coord, int* delta);

  const std::vector<std::int8_t>& state() const { return value_; }

 private:
  std::vector<std::int8_t> digit_;  // 0,1,2 per coordinate
  std::vector<std::int8_t> dir_;    // +1 or -1
  std::vector<std::int8_t> value_;  // digit mapped to {0,+1,-1}
};

// Calls on_delta(coord, delta) for each single-coordinate change and
// on_state() once per canonical vector (first nonzero entry = +1).
// Visits exactly (3^k - 1)/2 canonical vectors; `state`/`weight` give the
// current vector. Deltas also cover the rewinds between leading positions,
// so a caller-maintained u = Hx stays consistent throughout.
template <typename FDelta, typename FState>
void enumerate_canonical(int k, FDelta&& on_delta, FState&& on_state);

}  // namespace muefix

#include "muefix/ternary_inl.hpp"
