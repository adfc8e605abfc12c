// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "muefix/matrix.hpp"
#include "muefix/ternary.hpp"

namespace muefix {

struct DetectOptions {
  // Meet-in-the-middle table cap; beyond it the checker falls back to a
  // depth-first search with per-coordinate partial-sum infeasibility cuts.
  std::size_t max_table_entries = std::size_t{1} << 30;
};

struct DetectingVerdict {
  bool is_detecting = false;
  // Nonzero canonical x with Hx = 0, present iff not detecting. When several
  // exist the choice is unspecified but deterministic: the first match when
  // probing second-half assignments in lexicographic order against the
  // lexicographically smallest first-half completion.
  std::optional<TernaryVector> witness;
  std::uint64_t search_cost = 0;  // table insertions + probes, or DFS nodes
};

// Exact detecting test for binary inputs: is Null(H) ∩ {-1,0,+1}^K trivial?
// Works on the unscaled integer symbol coordinates, so the verdict is
// independent of scaling and of the particular binary input pair.
// Float-only (Gaussian) matrices -> ValidationError.
DetectingVerdict is_detecting(const SpreadingMatrix& h, const DetectOptions& opts = {});

// True iff H x = 0 exactly. Zero x or length mismatch -> ValidationError.
bool verify_witness(const SpreadingMatrix& h, const TernaryVector& x);

struct RowZeroEstimate {
  double estimate = 0.0;
  double ci_halfwidth = 0.0;  // 95% Wilson halfwidth (rule of three at 0 events)
  std::uint64_t trials = 0;
};

// Monte Carlo estimate of P(sum of `weight` signed symbol draws == 0), the
// single-row zero probability behind the detecting threshold. trials < 1000
// -> ValidationError.
RowZeroEstimate row_zero_prob(const Alphabet& alphabet, int weight, std::uint64_t trials,
                              std::uint64_t seed);

// rank(Sigma) / 2: the load threshold below which random matrices over the
// alphabet are detecting in the large-system limit.
double detecting_threshold(const Alphabet& alphabet);

}  // namespace muefix
