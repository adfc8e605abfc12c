// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "muefix/matrix.hpp"

namespace muefix::test {

// Hand-built binary antipodal matrix from +-1 signs (row-major).
inline SpreadingMatrix binary_from_signs(int n, int k, const std::vector<int>& signs) {
  SpreadingMatrix h;
  h.n_chips = n;
  h.n_users = k;
  h.ensemble = Ensemble::binary_antipodal;
  h.seed = 0;
  h.alphabet = binary_antipodal_alphabet();
  h.entries_exact.resize(static_cast<std::size_t>(n) * k);
  h.entries_float.resize(static_cast<std::size_t>(n) * k);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < signs.size(); ++i) {
    h.entries_exact[i] = signs[i] > 0 ? 0 : 1;  // symbol 0 = +1, symbol 1 = -1
    h.entries_float[i] = signs[i] > 0 ? scale : -scale;
  }
  return h;
}

}  // namespace muefix::test
