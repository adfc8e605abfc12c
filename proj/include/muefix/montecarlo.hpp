// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "muefix/efficiency.hpp"
#include "muefix/matrix.hpp"
#include "muefix/stats.hpp"

namespace muefix::mc {

enum class Estimator { event_prob, eta_quantiles, detecting_fraction, ber, weight_invariance, chi2_gof };
const char* estimator_name(Estimator e);
Estimator estimator_from_name(const std::string& name);

// One sweep: the chosen estimator evaluated on every (k, n) point.
// Per-trial randomness comes from keys derived from (base_seed, point index,
// trial index), so records are identical for any worker count.
struct ExperimentConfig {
  Ensemble ensemble = Ensemble::binary_antipodal;
  std::optional<Alphabet> alphabet;  // required for finite_alphabet
  std::vector<int> k_list;
  // Either a target zeta (n = chips_for_zeta per k) or explicit chip counts
  // aligned with k_list.
  std::variant<double, std::vector<int>> zeta_or_n = 0.3;
  double gamma = 1.0;
  double u_exp = 1.5;
  std::uint64_t trials = 100;
  std::uint64_t base_seed = 0;
  Estimator estimator = Estimator::event_prob;
  // event_prob: restrict the minimized family to even-weight vectors (the
  // family the union chain covers). For binary antipodal and gamma <= 1 the
  // event is unchanged; parity already settles odd weights.
  bool even_weight_only = false;
  std::vector<double> sigma_list = {1.0, 0.7, 0.5};  // ber
  int weight = 2;                                    // weight_invariance / chi2_gof
  int threads = 0;                                   // 0 -> resolve_threads default

  // Throws ValidationError listing every violated invariant.
  void validate() const;

  int chips_for(int point_index) const;
};

struct ExperimentRecord {
  int k = 0, n = 0;
  double zeta = 0.0, gamma = 1.0;
  double estimate = 0.0, ci_low = 0.0, ci_high = 1.0;
  std::uint64_t trials = 0, seed = 0;
  double wall_time_s = 0.0;  // in-memory only; excluded from serialized output
};

// Fraction of trial matrices whose exact minimum drops below gamma, with a
// 95% Wilson interval. For binary antipodal inputs the estimator asserts
// the parity law: any sub-gamma minimizer must have even weight.
std::vector<ExperimentRecord> estimate_event_prob(const ExperimentConfig& cfg);

struct EtaQuantileRecord {
  int k = 0, n = 0;
  double zeta = 0.0;
  double q_min = 0.0, q05 = 0.0, q50 = 0.0, q95 = 0.0;
  std::uint64_t trials = 0, seed = 0;
  double wall_time_s = 0.0;
};

// Empirical {min, 5%, 50%, 95%} quantiles of the exact minimum per point.
std::vector<EtaQuantileRecord> eta_quantiles(const ExperimentConfig& cfg);

// Fraction of trial matrices that are detecting. Exact ensembles only.
std::vector<ExperimentRecord> detecting_fraction(const ExperimentConfig& cfg);

struct BerRecord {
  double sigma = 0.0;
  double pe = 0.0, ci_low = 0.0, ci_high = 1.0;
  double eta_hat = 0.0;  // 2 sigma^2 ln(1/pe); natural log
  std::uint64_t bit_errors = 0, bits = 0, trials = 0, seed = 0;
  double wall_time_s = 0.0;
};

// Transmits random BPSK vectors through y = Hb + noise, decodes with exact
// ML detection, pools bit errors across users.
std::vector<BerRecord> ber_simulate(const SpreadingMatrix& h, std::span<const double> sigmas,
                                    std::uint64_t trials, std::uint64_t seed, int threads = 0);

// x^T R x sampled across independent matrix draws for one fixed pattern.
std::vector<double> quadform_samples(Ensemble ensemble, const std::optional<Alphabet>& alphabet,
                                     int k, int n, const TernaryVector& pattern,
                                     std::uint64_t trials, std::uint64_t seed, int threads = 0);

// Two-sample KS between the quadratic-form samples of two fixed patterns.
stats::KsResult weight_invariance_test(Ensemble ensemble, int k, int n, const TernaryVector& a,
                                       const TernaryVector& b, std::uint64_t trials,
                                       std::uint64_t seed, int threads = 0);

// Equal-weight pattern pair derived from `weight` per the distribution-
// depends-only-on-weight law.
stats::KsResult weight_invariance_test(Ensemble ensemble, int k, int n, int weight,
                                       std::uint64_t trials, std::uint64_t seed, int threads = 0);

// Samples (n/j) x_j^T R x_j over independent Gaussian draws.
std::vector<double> chi2_gof_samples(int k, int n, int weight_j, std::uint64_t trials,
                                     std::uint64_t seed, int threads = 0);

// One-sample KS of those samples against the chi-squared CDF with n degrees
// of freedom.
stats::KsResult chi2_gof_test(int k, int n, int weight_j, std::uint64_t trials, std::uint64_t seed,
                              int threads = 0);

}  // namespace muefix::mc
