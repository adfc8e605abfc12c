// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "muefix/bounds.hpp"
#include "muefix/common.hpp"
#include "muefix/detecting.hpp"
#include "muefix/montecarlo.hpp"
#include "muefix/parallel.hpp"
#include "muefix/rng.hpp"

using namespace muefix;
using namespace muefix::mc;

namespace {

bool same_records(const std::vector<ExperimentRecord>& a, const std::vector<ExperimentRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].k != b[i].k || a[i].n != b[i].n || a[i].zeta != b[i].zeta ||
        a[i].estimate != b[i].estimate || a[i].ci_low != b[i].ci_low ||
        a[i].ci_high != b[i].ci_high || a[i].trials != b[i].trials || a[i].seed != b[i].seed) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("montecarlo");

TEST_CASE("records are identical for any worker count") {
  ExperimentConfig cfg;
  cfg.ensemble = Ensemble::binary_antipodal;
  cfg.k_list = {6, 8};
  cfg.zeta_or_n = 0.4;
  cfg.trials = 60;
  cfg.base_seed = 17;
  cfg.threads = 1;
  const auto serial = estimate_event_prob(cfg);
  cfg.threads = 4;
  const auto parallel = estimate_event_prob(cfg);
  CHECK(same_records(serial, parallel));

  cfg.estimator = Estimator::detecting_fraction;
  cfg.threads = 1;
  const auto d1 = detecting_fraction(cfg);
  cfg.threads = 4;
  const auto d4 = detecting_fraction(cfg);
  CHECK(same_records(d1, d4));
}

TEST_CASE("single-user event probability is exactly zero") {
  ExperimentConfig cfg;
  cfg.k_list = {1};
  cfg.zeta_or_n = std::vector<int>{4};
  cfg.trials = 50;
  cfg.base_seed = 3;
  const auto records = estimate_event_prob(cfg);
  REQUIRE(records.size() == 1);
  CHECK(records[0].estimate == 0.0);
  CHECK(records[0].ci_low == 0.0);
}

TEST_CASE("event probability grows with the load (k = 10)") {
  ExperimentConfig cfg;
  cfg.k_list = {10};
  cfg.trials = 500;
  cfg.base_seed = 5;
  cfg.zeta_or_n = 0.3;
  const auto lo = estimate_event_prob(cfg)[0];
  cfg.zeta_or_n = 0.45;
  const auto hi = estimate_event_prob(cfg)[0];
  CHECK(lo.estimate <= hi.estimate + (hi.ci_high - hi.ci_low));
}

TEST_CASE("even-weight restriction equals the full event for binary antipodal at gamma 1") {
  ExperimentConfig cfg;
  cfg.k_list = {8};
  cfg.zeta_or_n = std::vector<int>{10};
  cfg.trials = 200;
  cfg.base_seed = 11;
  const auto full = estimate_event_prob(cfg)[0];
  cfg.even_weight_only = true;
  const auto even = estimate_event_prob(cfg)[0];
  // parity: odd weights can never dip below gamma = 1
  CHECK(full.estimate == even.estimate);
}

TEST_CASE("event estimate respects the union bound (trivially when the bound saturates)") {
  ExperimentConfig cfg;
  cfg.k_list = {8};
  cfg.zeta_or_n = std::vector<int>{12};
  cfg.trials = 400;
  cfg.base_seed = 23;
  cfg.even_weight_only = true;
  const auto rec = estimate_event_prob(cfg)[0];
  const auto bound = bounds::union_bound_binary(8, 12, 1.5, 1.0);
  const double linear = std::exp2(bound.value_log2);
  if (linear < 1.0) {
    CHECK(rec.ci_low <= linear);
  } else {
    CHECK(rec.estimate <= 1.0);
  }
}

TEST_CASE("eta quantiles are degenerate at k = 1 and ordered in general") {
  ExperimentConfig cfg;
  cfg.estimator = Estimator::eta_quantiles;
  cfg.k_list = {1};
  cfg.zeta_or_n = std::vector<int>{5};
  cfg.trials = 40;
  cfg.base_seed = 2;
  const auto one = eta_quantiles(cfg)[0];
  CHECK(one.q_min == 1.0);
  CHECK(one.q05 == 1.0);
  CHECK(one.q50 == 1.0);
  CHECK(one.q95 == 1.0);

  cfg.ensemble = Ensemble::gaussian;
  cfg.k_list = {8};
  cfg.zeta_or_n = std::vector<int>{10};
  cfg.trials = 100;
  const auto g = eta_quantiles(cfg)[0];
  CHECK(g.q_min <= g.q05);
  CHECK(g.q05 <= g.q50);
  CHECK(g.q50 <= g.q95);
}

TEST_CASE("sampled gaussian efficiencies never exceed the best column norm") {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    const auto h = gen_gaussian(8, 10, rng::derive(99, trial));
    const auto g = gram(h);
    double min_col = g.at(0, 0);
    for (int j = 1; j < 8; ++j) min_col = std::min(min_col, g.at(j, j));
    CHECK(eta_branch_bound(h).eta.value <= min_col + 1e-12);
  }
}

TEST_CASE("detecting fraction trends with the load and rejects gaussian input") {
  ExperimentConfig cfg;
  cfg.estimator = Estimator::detecting_fraction;
  cfg.k_list = {8};
  cfg.trials = 60;
  cfg.base_seed = 7;
  cfg.zeta_or_n = 0.25;
  const auto lo = detecting_fraction(cfg)[0];
  cfg.zeta_or_n = 0.9;
  const auto hi = detecting_fraction(cfg)[0];
  CHECK(lo.estimate >= hi.estimate);

  cfg.ensemble = Ensemble::gaussian;
  CHECK_THROWS_WITH_AS(detecting_fraction(cfg), doctest::Contains("unsupported"), ValidationError);
}

TEST_CASE("full-column-rank draws with n >= k are detecting") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto h = gen_binary_antipodal(4, 8, seed);
    // exact rank by fraction-free elimination on the +-1 columns
    const auto view = exact_view(h);
    std::vector<Rational> m(static_cast<std::size_t>(view.n) * view.k);
    for (int i = 0; i < view.n; ++i) {
      for (int j = 0; j < view.k; ++j) {
        m[static_cast<std::size_t>(i) * view.k + j] = Rational(view.column(j)[static_cast<std::size_t>(i)]);
      }
    }
    int rank = 0;
    for (int col = 0; col < view.k; ++col) {
      int pivot = -1;
      for (int row = rank; row < view.n; ++row) {
        if (m[static_cast<std::size_t>(row) * view.k + col] != 0) {
          pivot = row;
          break;
        }
      }
      if (pivot < 0) continue;
      for (int j = 0; j < view.k; ++j) {
        std::swap(m[static_cast<std::size_t>(pivot) * view.k + j], m[static_cast<std::size_t>(rank) * view.k + j]);
      }
      const Rational lead = m[static_cast<std::size_t>(rank) * view.k + col];
      for (int row = rank + 1; row < view.n; ++row) {
        const Rational f = m[static_cast<std::size_t>(row) * view.k + col] / lead;
        for (int j = 0; j < view.k; ++j) {
          m[static_cast<std::size_t>(row) * view.k + j] -= f * m[static_cast<std::size_t>(rank) * view.k + j];
        }
      }
      ++rank;
    }
    const auto v = is_detecting(h);
    if (rank == view.k) CHECK(v.is_detecting);
    if (!v.is_detecting) CHECK(rank < view.k);
  }
}

TEST_CASE("tiny chip counts leave witnesses behind") {
  int non_detecting = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto h = gen_binary_antipodal(6, 2, seed);
    const auto v = is_detecting(h);
    if (!v.is_detecting) {
      ++non_detecting;
      CHECK(verify_witness(h, *v.witness));
    }
  }
  CHECK(non_detecting > 0);  // counting: 3^6/2 vectors vs 9 reachable sums
}

TEST_CASE("single-user BER tracks Q(1/sigma)") {
  const auto h = gen_binary_antipodal(1, 4, 77);
  const double sigma = 0.5;
  const std::uint64_t trials = 100000;
  const auto records = ber_simulate(h, std::vector<double>{sigma}, trials, 909);
  const double q = stats::q_function(1.0 / sigma);
  const double sd = std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
  CHECK(std::abs(records[0].pe - q) <= 4.0 * sd);
  CHECK(records[0].bits == trials);
}

TEST_CASE("near-zero noise produces no bit errors") {
  const auto h = gen_binary_antipodal(4, 8, 11);
  const auto records = ber_simulate(h, std::vector<double>{0.001}, 10000, 33);
  CHECK(records[0].bit_errors == 0);
  CHECK(records[0].ci_low == 0.0);
  CHECK(std::isinf(records[0].eta_hat));
}

TEST_CASE("ber argument checks and reproducibility across thread counts") {
  const auto h = gen_binary_antipodal(3, 6, 5);
  CHECK_THROWS_AS(ber_simulate(h, std::vector<double>{0.5}, 0, 1), ValidationError);
  CHECK_THROWS_AS(ber_simulate(h, std::vector<double>{}, 10, 1), ValidationError);
  const auto a = ber_simulate(h, std::vector<double>{0.8, 0.5}, 500, 12, 1);
  const auto b = ber_simulate(h, std::vector<double>{0.8, 0.5}, 500, 12, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pe == b[i].pe);
    CHECK(a[i].bit_errors == b[i].bit_errors);
    CHECK(a[i].eta_hat == b[i].eta_hat);
  }
}

TEST_CASE("finite-sigma efficiency slope anchors a degenerate instance") {
  // K=4, N=8, seed 32: exact eta is 0, the smallest point of the value grid.
  const auto h = gen_binary_antipodal(4, 8, 32);
  REQUIRE(eta_branch_bound(h).eta.value == 0.0);
  const auto rec = ber_simulate(h, std::vector<double>{0.5}, 20000, 4711)[0];
  CHECK(rec.eta_hat <= 1.1);
  CHECK(rec.eta_hat > 0.0);
}

TEST_CASE("gaussian weight probability agrees with simulation at n=16, j=3") {
  const std::uint64_t trials = 100000;
  const auto samples = quadform_samples(Ensemble::gaussian, std::nullopt, 4, 16,
                                        TernaryVector::from({1, 1, 1, 0}), trials, 31415);
  std::uint64_t below = 0;
  for (const double s : samples) below += s < 1.0;
  const double estimate = static_cast<double>(below) / static_cast<double>(trials);
  const double p = bounds::gaussian_weight_prob(16, 3, 1.0);
  const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  CHECK(std::abs(estimate - p) <= 4.0 * sd);
}

TEST_CASE("MUEFIX_THREADS is the fallback worker cap") {
  setenv("MUEFIX_THREADS", "3", 1);
  CHECK(resolve_threads(0) == 3);
  CHECK(resolve_threads(2) == 2);
  unsetenv("MUEFIX_THREADS");
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("equal-weight patterns share the quadratic-form law") {
  const auto ks = weight_invariance_test(Ensemble::binary_antipodal, 6, 8, 2, 10000, 314);
  CHECK(ks.pass_1pct);
}

TEST_CASE("identical patterns give a vanishing KS statistic") {
  const auto pattern = TernaryVector::from({1, 1, 0, 0, 0, 0});
  const auto ks = weight_invariance_test(Ensemble::binary_antipodal, 6, 8, pattern, pattern, 8000, 11);
  CHECK(ks.pass_1pct);
  CHECK(ks.statistic < 0.05);
}

TEST_CASE("cross-weight negative control fails decisively") {
  const auto w2 = TernaryVector::from({1, 1, 0, 0, 0, 0});
  const auto w4 = TernaryVector::from({1, 1, 1, 1, 0, 0});
  const auto ks = weight_invariance_test(Ensemble::binary_antipodal, 6, 8, w2, w4, 10000, 12);
  CHECK(!ks.pass_1pct);
}

TEST_CASE("scaled gaussian quadratic forms follow the chi-squared law") {
  const auto ks = chi2_gof_test(8, 16, 3, 10000, 2025);
  CHECK(ks.pass_1pct);
  // wrong degrees of freedom: the same samples must be rejected
  const auto samples = chi2_gof_samples(8, 16, 3, 10000, 2025);
  const auto wrong = stats::ks_one_sample(
      samples, [](double x) { return x <= 0.0 ? 0.0 : bounds::chi2_cdf(15, x); });
  CHECK(!wrong.pass_1pct);
}

TEST_CASE("weight-1 chi-squared reduction is the column norm") {
  const auto samples = chi2_gof_samples(5, 12, 1, 4000, 77);
  double mean = 0.0;
  for (const double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  CHECK(mean == doctest::Approx(12.0).epsilon(0.05));  // E[chi2_n] = n
}

TEST_CASE("config validation lists the violations") {
  ExperimentConfig cfg;
  cfg.k_list = {};
  cfg.gamma = 1.5;
  cfg.trials = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("gamma"), ValidationError);
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("k_list") != std::string::npos);
    CHECK(what.find("trials") != std::string::npos);
    CHECK(what.find("(0,1]") != std::string::npos);
  }
}

TEST_SUITE_END();
