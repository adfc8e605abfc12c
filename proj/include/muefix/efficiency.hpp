// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "muefix/matrix.hpp"
#include "muefix/ternary.hpp"

namespace muefix {

enum class Method { brute_force, branch_bound };
const char* method_name(Method m);

// A quadratic-form value. `exact` is present whenever the matrix carries an
// exact representation whose norm is rational (real rational symbols, or the
// {1, i} basis); `value` is then the double image of `exact`.
struct EtaValue {
  double value = 0.0;
  std::optional<Rational> exact;
};

struct EfficiencyResult {
  EtaValue eta;
  TernaryVector argmin;
  std::uint64_t vectors_examined = 0;
  std::uint64_t nodes_pruned = 0;
  Method method = Method::brute_force;
};

struct SearchOptions {
  int bruteforce_user_cap = 20;  // refuse brute force beyond 3^cap states
  double pivot_tol = 1e-10;      // LDL^T pivot below this -> exact fallback
};

// x^T R x = ||H x||^2 for one error vector. Float evaluation always; exact
// rational alongside when available. Zero x or length mismatch -> ValidationError.
EtaValue eta_for_error_vector(const SpreadingMatrix& h, const TernaryVector& x);

// Exact minimum over all (3^K - 1)/2 canonical error vectors, by ternary
// Gray enumeration with incremental u = Hx updates. Ties resolve to the
// lexicographically smallest canonical argmin.
EfficiencyResult eta_bruteforce(const SpreadingMatrix& h, const SearchOptions& opts = {});

// Same minimum via LDL^T depth-first search with partial-sum pruning.
// Falls back to Gray-code brute force (unbounded) when K > N or the
// smallest pivot drops below opts.pivot_tol. The argmin may differ from
// eta_bruteforce under ties; the value never does.
EfficiencyResult eta_branch_bound(const SpreadingMatrix& h, const SearchOptions& opts = {});

// Minimum of the form restricted to weight-w canonical vectors.
EtaValue min_over_weight(const SpreadingMatrix& h, int w);

// Minimum over all even-weight canonical vectors (the family the union
// bounds cover; odd weights are handled exactly by the parity argument).
EtaValue min_even_weight(const SpreadingMatrix& h);

// Maximum-likelihood joint detection: argmin over b in {+-1}^K of
// ||y - H b||^2. Ties prefer +1 at the first differing user. Real matrices
// only; K above opts.bruteforce_user_cap -> CapacityError.
std::vector<std::int8_t> ml_detect(const SpreadingMatrix& h, std::span<const double> y,
                                   const SearchOptions& opts = {});

}  // namespace muefix
