// SPDX-License-Identifier: Apache-2.0
#include "muefix/bounds.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "muefix/common.hpp"

namespace muefix::bounds {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLog2E = std::numbers::log2e;
}  // namespace

double binary_entropy(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("binary_entropy: t outside [0,1]");
  if (t == 0.0 || t == 1.0) return 0.0;
  return -t * std::log2(t) - (1.0 - t) * std::log2(1.0 - t);
}

double p_zero(std::int64_t j) {
  if (j < 1) throw ValidationError("p_zero: j must be >= 1");
  double p = 0.5;
  for (std::int64_t i = 1; i < j; ++i) {
    p *= static_cast<double>(2 * i + 1) / static_cast<double>(2 * i + 2);
  }
  return p;
}

std::vector<double> p_zero_table(std::int64_t jmax) {
  if (jmax < 1) throw ValidationError("p_zero_table: jmax must be >= 1");
  std::vector<double> p(static_cast<std::size_t>(jmax) + 1, 0.0);
  p[1] = 0.5;
  for (std::int64_t j = 1; j < jmax; ++j) {
    p[static_cast<std::size_t>(j) + 1] = p[static_cast<std::size_t>(j)] * static_cast<double>(2 * j + 1) /
                                         static_cast<double>(2 * j + 2);
  }
  return p;
}

double p_zero_log2(std::int64_t j) { return std::log2(p_zero(j)); }

Rational p_zero_exact(std::int64_t j) {
  if (j < 1) throw ValidationError("p_zero_exact: j must be >= 1");
  Rational p(1, 2);
  for (std::int64_t i = 1; i < j; ++i) {
    p *= Rational(2 * i + 1, 2 * i + 2);
  }
  p.canonicalize();
  return p;
}

double p_zero_upper(std::int64_t j) {
  if (j < 1) throw ValidationError("p_zero_upper: j must be >= 1");
  return std::numbers::e / (std::numbers::pi * std::sqrt(2.0 * static_cast<double>(j)));
}

double log2_binomial(std::int64_t m, std::int64_t r) {
  if (r < 0 || r > m) throw ValidationError("log2_binomial: r outside [0, m]");
  return (std::lgamma(static_cast<double>(m) + 1.0) - std::lgamma(static_cast<double>(r) + 1.0) -
          std::lgamma(static_cast<double>(m - r) + 1.0)) * kLog2E;
}

double binom_entropy_bound(std::int64_t m, std::int64_t r) {
  if (m < 0 || r < 0 || r > m) throw ValidationError("binom_entropy_bound: need 0 <= r <= m");
  if (m == 0) return 0.0;
  return static_cast<double>(m) * binary_entropy(static_cast<double>(r) / static_cast<double>(m));
}

double log_sum_exp2(std::span<const double> values_log2) {
  double peak = kNegInf;
  for (const double v : values_log2) peak = std::max(peak, v);
  if (peak == kNegInf) return kNegInf;
  double sum = 0.0;
  for (const double v : values_log2) sum += std::exp2(v - peak);
  return peak + std::log2(sum);
}

namespace {

BoundSplit make_split(const std::vector<BoundTerm>& terms, std::int64_t j_split) {
  std::vector<double> first, second;
  for (const auto& t : terms) {
    (t.j <= j_split ? first : second).push_back(t.term_log2);
  }
  return {log_sum_exp2(first), log_sum_exp2(second), j_split};
}

}  // namespace

BoundEvaluation union_bound_binary(std::int64_t k, std::int64_t n, double u_exp, double gamma) {
  if (k < 2) throw ValidationError("union_bound_binary: k must be >= 2");
  if (n < 4) throw ValidationError("union_bound_binary: n must be >= 4");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("union_bound_binary: gamma outside (0,1]");
  if (!(u_exp > 1.0)) throw ValidationError("union_bound_binary: u must be > 1");

  BoundEvaluation eval;
  eval.params = {k, n, gamma, u_exp};
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  // Sum limits use floors (the chain assumes divisibility); the event always
  // keeps at least its i = 0 term.
  const double mult_log2 = std::log2(std::max<double>(1.0, std::floor(nd * gamma / 4.0)));
  const double entropy_term = nd * binary_entropy(gamma / 4.0);

  const auto p = p_zero_table(k / 2);
  for (std::int64_t j = 1; j <= k / 2; ++j) {
    const double pj = p[static_cast<std::size_t>(j)];
    const double t = mult_log2 +
                     kd * (binary_entropy(2.0 * static_cast<double>(j) / kd) + 2.0 * static_cast<double>(j) / kd) +
                     entropy_term + (nd * (4.0 - gamma) / 4.0) * std::log2(pj) +
                     (nd * gamma / 4.0) * std::log2(1.0 - pj);
    eval.terms.push_back({j, t});
  }
  std::vector<double> all;
  all.reserve(eval.terms.size());
  for (const auto& t : eval.terms) all.push_back(t.term_log2);
  eval.value_log2 = log_sum_exp2(all);

  const std::int64_t j0 = static_cast<std::int64_t>(
      std::floor(kd / (2.0 * std::pow(std::log2(kd), u_exp))));
  eval.split = make_split(eval.terms, j0);
  return eval;
}

double chi2_cdf(int dof, double x) {
  if (dof < 1) throw ValidationError("chi2_cdf: dof must be >= 1");
  if (x < 0.0) throw ValidationError("chi2_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(dof) / 2.0, x / 2.0);
}

double gaussian_weight_prob(int n, int j, double t) {
  if (j < 1) throw ValidationError("gaussian_weight_prob: weight must be >= 1");
  if (!(t > 0.0 && t <= 1.0)) throw ValidationError("gaussian_weight_prob: threshold outside (0,1]");
  return chi2_cdf(n, static_cast<double>(n) * t / static_cast<double>(j));
}

BoundEvaluation union_bound_gaussian(std::int64_t k, std::int64_t n, double u_exp) {
  if (k < 2) throw ValidationError("union_bound_gaussian: k must be >= 2");
  if (n < 4) throw ValidationError("union_bound_gaussian: n must be >= 4");
  if (n % 2 != 0) throw ValidationError("union_bound_gaussian: n must be even");
  if (!(u_exp > 1.0)) throw ValidationError("union_bound_gaussian: u must be > 1");

  BoundEvaluation eval;
  eval.params = {k, n, 1.0, u_exp};
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double prefix = -1.0 + 0.5 * std::log2(nd / std::numbers::pi);
  for (std::int64_t j = 2; j <= k; ++j) {
    const double jd = static_cast<double>(j);
    const double t = prefix + log2_binomial(k, j) + jd +
                     (nd / 2.0) * ((1.0 - 1.0 / jd) * kLog2E - std::log2(jd));
    eval.terms.push_back({j, t});
  }
  std::vector<double> all;
  all.reserve(eval.terms.size());
  for (const auto& t : eval.terms) all.push_back(t.term_log2);
  eval.value_log2 = log_sum_exp2(all);

  const std::int64_t j1 = static_cast<std::int64_t>(std::floor(kd / std::pow(std::log2(kd), u_exp)));
  eval.split = make_split(eval.terms, j1);
  return eval;
}

const char* curve_tag_name(CurveTag tag) {
  switch (tag) {
    case CurveTag::exact: return "exact";
    case CurveTag::lower_bound: return "lower_bound";
    case CurveTag::unknown: return "unknown";
    case CurveTag::zero: return "zero";
  }
  return "?";
}

LowerBoundCurvePoint fig1_lower_bound(double zeta) {
  if (!(zeta > 0.0)) throw ValidationError("fig1_lower_bound: zeta must be positive");
  LowerBoundCurvePoint pt;
  pt.zeta = zeta;
  const double upper_unknown = std::log2(3.0) / 2.0;
  if (zeta <= 0.375) {
    pt.tag = CurveTag::exact;
    pt.eta_bound = 1.0;
  } else if (zeta < 0.5) {
    pt.tag = CurveTag::lower_bound;
    pt.eta_bound = 4.0 * (1.0 - 2.0 * zeta);
  } else if (zeta <= upper_unknown) {
    pt.tag = CurveTag::unknown;
  } else {
    pt.tag = CurveTag::zero;
    pt.eta_bound = 0.0;
  }
  return pt;
}

double lindstrom_n0(std::int64_t k) {
  if (k < 2) throw ValidationError("lindstrom_n0: k must be >= 2");
  return 2.0 * static_cast<double>(k) / std::log2(static_cast<double>(k));
}

}  // namespace muefix::bounds
