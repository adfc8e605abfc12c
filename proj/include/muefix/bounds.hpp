// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "muefix/rational.hpp"

namespace muefix::bounds {

// h(t) = -t log2 t - (1-t) log2(1-t), with h(0) = h(1) = 0.
double binary_entropy(double t);

// p(j) = C(2j, j) 2^(-2j): the probability that a signed sum of 2j fair
// +-1 steps returns to zero. Computed by the recurrence
// p(j+1) = p(j) (2j+1)/(2j+2) from p(1) = 1/2.
double p_zero(std::int64_t j);
double p_zero_log2(std::int64_t j);
// p(1..jmax) in one pass; index 0 unused.
std::vector<double> p_zero_table(std::int64_t jmax);
Rational p_zero_exact(std::int64_t j);

// Stirling-based closed form e / (pi sqrt(2j)); dominates p(j) for all j >= 1.
double p_zero_upper(std::int64_t j);

// log2 C(m, r) <= m h(r/m); returns the right-hand side.
double binom_entropy_bound(std::int64_t m, std::int64_t r);

// log2 C(m, r) via lgamma.
double log2_binomial(std::int64_t m, std::int64_t r);

// log2(sum_i 2^a_i) with the usual max shift; -inf for an empty span.
double log_sum_exp2(std::span<const double> values_log2);

struct BoundTerm {
  std::int64_t j = 0;
  double term_log2 = 0.0;
};

struct BoundSplit {
  double first_log2 = 0.0;   // j <= j_split
  double second_log2 = 0.0;  // j > j_split
  std::int64_t j_split = 0;
};

struct BoundParams {
  std::int64_t k = 0;
  std::int64_t n = 0;
  double gamma = 1.0;
  double u = 1.5;
};

struct BoundEvaluation {
  double value_log2 = 0.0;  // -inf allowed
  std::vector<BoundTerm> terms;
  std::optional<BoundSplit> split;
  BoundParams params;
};

// Binary-antipodal union bound over even weights 2j, j = 1..floor(K/2):
//   term_j = max(1, floor(N gamma/4))
//            * 2^{K (h(2j/K) + 2j/K)}
//            * [2^{4 h(gamma/4)} p(j)^{4-gamma} (1-p(j))^gamma]^{N/4},
// evaluated in log2 domain, with the two-part split at
// j0 = floor(K / (2 (log2 K)^u_exp)). gamma = 1 recovers the plain chain.
// Sum limits use floors; the multiplier keeps at least the i = 0 term.
BoundEvaluation union_bound_binary(std::int64_t k, std::int64_t n, double u_exp = 1.5,
                                   double gamma = 1.0);

// Regularized lower incomplete gamma P(dof/2, x/2).
double chi2_cdf(int dof, double x);

// P(x_j^T R x_j < t) for the Gaussian ensemble and a weight-j error vector:
// chi2_cdf(n, n t / j).
double gaussian_weight_prob(int n, int j, double t);

// Gaussian-ensemble tail chain over j = 2..K:
//   term_j = (1/2) sqrt(N/pi) C(K, j) 2^j (e^{1 - 1/j} / j)^{N/2},
// split at j1 = floor(K / (log2 K)^u_exp). N must be even and >= 4.
// The weight-1 part is deliberately not folded in; probe it via
// gaussian_weight_prob with a caller-chosen threshold.
BoundEvaluation union_bound_gaussian(std::int64_t k, std::int64_t n, double u_exp = 1.5);

enum class CurveTag { exact, lower_bound, unknown, zero };
const char* curve_tag_name(CurveTag tag);

struct LowerBoundCurvePoint {
  double zeta = 0.0;
  CurveTag tag = CurveTag::exact;
  std::optional<double> eta_bound;  // absent iff tag == unknown
};

// The piecewise lower-bound curve for the limiting efficiency:
//   1 on (0, 3/8]; 4(1 - 2 zeta) on (3/8, 1/2); no known result on
//   [1/2, log2(3)/2]; 0 beyond log2(3)/2.
LowerBoundCurvePoint fig1_lower_bound(double zeta);

// Asymptotic estimate 2K / log2 K of the minimal row count of a binary
// detecting matrix (reference line only).
double lindstrom_n0(std::int64_t k);

}  // namespace muefix::bounds
