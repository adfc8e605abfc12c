// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "muefix/rational.hpp"

namespace muefix {

enum class ScaleRule { inv_sqrt_n, inv_sqrt_2n };

const char* scale_rule_name(ScaleRule rule);
ScaleRule scale_rule_from_name(const std::string& name);

// A finite symmetric symbol set. Each symbol is a vector of exact rational
// coordinates over a declared basis of real/complex numbers that the caller
// asserts to be linearly independent over Q (e.g. basis {1} for {+-1},
// basis {1, i} for {+-1 +- i}). Verifying the independence of the basis
// itself is the caller's responsibility; everything downstream works on the
// rational coordinates only.
struct Alphabet {
  std::vector<std::vector<Rational>> symbols;  // m symbols, each dim coords
  std::vector<Rational> probabilities;         // m entries, sum to 1
  std::vector<std::complex<double>> basis;     // dim basis values
  ScaleRule scale_rule = ScaleRule::inv_sqrt_n;

  int size() const { return static_cast<int>(symbols.size()); }
  int dim() const { return static_cast<int>(basis.size()); }
  // True iff the basis is exactly {1, i}; coordinates are then (re, im).
  bool complex_basis() const;
  // True iff every basis value is real.
  bool real_basis() const;

  // Throws ValidationError listing every violated invariant:
  // symmetry (s <-> -s with equal probability), zero mean, non-degeneracy
  // (mass at 0 strictly below 1), positive probabilities summing to 1.
  void validate() const;
};

Alphabet make_alphabet(std::vector<std::vector<Rational>> symbols,
                       std::vector<Rational> probabilities,
                       std::vector<std::complex<double>> basis = {{1.0, 0.0}},
                       ScaleRule rule = ScaleRule::inv_sqrt_n);

// {+1, -1} with probability 1/2 each over basis {1}.
Alphabet binary_antipodal_alphabet();

// {(+-1 +- i)} uniform over basis {1, i}, scaled by 1/sqrt(2N).
Alphabet qpsk_alphabet();

// Rank over Q of the m x dim symbol coordinate matrix, by fraction-free
// (Bareiss) elimination on exact rationals.
int alphabet_rank(const Alphabet& alphabet);

// Symbol coordinates scaled to integers by the common denominator.
struct ExactSymbolCoords {
  std::vector<std::int64_t> coords;  // m * dim, row-major per symbol
  std::int64_t denom = 1;
  int dim = 1;

  const std::int64_t* symbol(int s) const { return coords.data() + static_cast<std::size_t>(s) * dim; }
};
ExactSymbolCoords exact_symbol_coords(const Alphabet& alphabet);

// Cumulative sampling thresholds t_s = floor(2^64 * sum_{i<=s} p_i); a draw
// u picks the first symbol with u < t_s. Exact for dyadic probabilities.
std::vector<unsigned __int128> sampling_thresholds(const Alphabet& alphabet);

}  // namespace muefix
