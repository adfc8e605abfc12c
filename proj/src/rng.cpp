// SPDX-License-Identifier: Apache-2.0
#include "muefix/rng.hpp"

#include <cmath>
#include <numbers>

namespace muefix::rng {

double gaussian_from_bits(std::uint64_t a, std::uint64_t b) noexcept {
  const double u1 = unit_from_bits(a);
  const double u2 = unit_from_bits(b);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace muefix::rng
