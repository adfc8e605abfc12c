// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace muefix::stats {

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

// 95% Wilson score interval; rule-of-three endpoints at 0 or n successes.
WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials);

// Gaussian tail Q(x) = P(N(0,1) > x).
double q_function(double x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool pass_1pct = false;  // p_value >= 0.01
  std::size_t n1 = 0, n2 = 0;
};

// One-sample Kolmogorov-Smirnov against a continuous CDF. The p-value uses
// the asymptotic Kolmogorov distribution with Stephens' effective-n
// correction; at the sample sizes used here it is accurate to well below
// the 1% decision level.
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Nearest-rank quantile of a sorted sample: s[ceil(q n) - 1], q in (0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace muefix::stats
