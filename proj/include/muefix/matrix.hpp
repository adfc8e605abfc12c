// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "muefix/alphabet.hpp"
#include "muefix/rational.hpp"

namespace muefix {

enum class Ensemble { binary_antipodal, gaussian, finite_alphabet };

const char* ensemble_name(Ensemble e);
Ensemble ensemble_from_name(const std::string& name);

// N x K spreading matrix. Exact ensembles carry per-entry symbol indices into
// the alphabet next to the scaled float values; exact arithmetic always runs
// on the unscaled integer coordinates, the 1/sqrt(N) (or 1/sqrt(2N)) factor
// exists only in entries_float.
//
// entries_float layout: row-major, `planes()` doubles per entry. One plane
// for real matrices; (re, im) interleaved for complex alphabets.
struct SpreadingMatrix {
  int n_chips = 0;  // N
  int n_users = 0;  // K
  Ensemble ensemble = Ensemble::binary_antipodal;
  std::uint64_t seed = 0;
  std::optional<Alphabet> alphabet;         // present iff exact representation
  std::vector<std::int32_t> entries_exact;  // N*K symbol indices, empty for gaussian
  std::vector<double> entries_float;        // N*K*planes

  bool has_exact() const { return !entries_exact.empty(); }
  bool is_complex() const { return alphabet && !alphabet->real_basis(); }
  int planes() const { return is_complex() ? 2 : 1; }

  double fvalue(int row, int col, int plane = 0) const {
    return entries_float[(static_cast<std::size_t>(row) * n_users + col) * planes() + plane];
  }
};

SpreadingMatrix gen_binary_antipodal(int k, int n, std::uint64_t seed);
SpreadingMatrix gen_gaussian(int k, int n, std::uint64_t seed);
SpreadingMatrix gen_finite_alphabet(int k, int n, const Alphabet& alphabet, std::uint64_t seed);

// R = H^dagger H as floats (real part for complex matrices; the ternary
// quadratic form only touches the real part). exact_r = N * R in exact
// rationals when the alphabet supports exact norms; integer-valued for
// binary antipodal.
struct GramMatrix {
  int k = 0;
  std::vector<double> r;  // k*k, symmetric
  std::vector<Rational> exact_r;  // k*k or empty

  double at(int i, int j) const { return r[static_cast<std::size_t>(i) * k + j]; }
  bool has_exact() const { return !exact_r.empty(); }
};

GramMatrix gram(const SpreadingMatrix& h);

// zeta = K / (N log3 K); requires k >= 2.
double zeta(int k, int n);
// Smallest N with zeta(k, N) <= zeta_target, i.e. ceil(k / (zeta * log3 k)).
int chips_for_zeta(int k, double zeta_target);

// Unscaled integer view of an exact matrix for hot loops. Column j occupies
// coords[j*n*dim .. (j+1)*n*dim), dim coordinates per row.
struct ExactMatrixView {
  int n = 0, k = 0, dim = 1;
  std::int64_t denom = 1;
  bool norm_supported = false;  // dim 1, or the {1, i} basis
  std::vector<std::int64_t> coords;
  // ||H_float x||^2 = (integer norm) / norm_denom
  Rational norm_denom;

  std::span<const std::int64_t> column(int j) const {
    return {coords.data() + static_cast<std::size_t>(j) * n * dim, static_cast<std::size_t>(n) * dim};
  }
};

ExactMatrixView exact_view(const SpreadingMatrix& h);

}  // namespace muefix
