// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

namespace muefix {

// on_delta(int coord, int delta): a single coordinate changed by delta.
// on_state(const std::vector<std::int8_t>& x, int weight): x is canonical.
template <typename FDelta, typename FState>
void enumerate_canonical(int k, FDelta&& on_delta, FState&& on_state) {
  if (k <= 0) return;
  std::vector<std::int8_t> x(static_cast<std::size_t>(k), 0);
  for (int lead = k - 1; lead >= 0; --lead) {
    x[lead] = 1;
    int weight = 1;
    on_delta(lead, +1);
    on_state(static_cast<const std::vector<std::int8_t>&>(x), weight);
    TernaryGray gray(k - 1 - lead);
    int c = 0, d = 0;
    while (gray.advance(&c, &d)) {
      const int coord = lead + 1 + c;
      const std::int8_t before = x[coord];
      x[coord] = static_cast<std::int8_t>(before + d);
      weight += (x[coord] != 0) - (before != 0);
      on_delta(coord, d);
      on_state(static_cast<const std::vector<std::int8_t>&>(x), weight);
    }
    for (int i = lead + 1; i < k; ++i) {
      if (x[i] != 0) {
        on_delta(i, -x[i]);
        x[i] = 0;
      }
    }
    on_delta(lead, -1);
    x[lead] = 0;
  }
}

}  // namespace muefix
