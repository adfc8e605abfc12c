// SPDX-License-Identifier: Apache-2.0
#include "muefix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "muefix/common.hpp"

namespace muefix::stats {

namespace {
constexpr double kZ95 = 1.959963984540054;

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{i-1} exp(-2 i^2 lambda^2).
double kolmogorov_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int i = 1; i <= 200; ++i) {
    const double term = std::exp(-2.0 * i * i * lambda * lambda);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult finish_ks(double d, double n_eff, std::size_t n1, std::size_t n2) {
  const double root = std::sqrt(n_eff);
  const double lambda = (root + 0.12 + 0.11 / root) * d;
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_q(lambda);
  r.pass_1pct = r.p_value >= 0.01;
  r.n1 = n1;
  r.n2 = n2;
  return r;
}
}  // namespace

WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw ValidationError("wilson95: zero trials");
  if (successes > trials) throw ValidationError("wilson95: successes exceed trials");
  const double n = static_cast<double>(trials);
  // Rule of three at the empty tails; rare events dominate these experiments.
  if (successes == 0) return {0.0, std::min(1.0, 3.0 / n)};
  if (successes == trials) return {std::max(0.0, 1.0 - 3.0 / n), 1.0};
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ValidationError("ks_one_sample: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f));
  }
  return finish_ks(d, n, samples.size(), 0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ValidationError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double n_eff = na * nb / (na + nb);
  return finish_ks(d, n_eff, a.size(), b.size());
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile_sorted: empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw ValidationError("quantile_sorted: q outside (0,1]");
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace muefix::stats
