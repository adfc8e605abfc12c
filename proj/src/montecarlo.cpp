// SPDX-License-Identifier: Apache-2.0
#include "muefix/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "muefix/bounds.hpp"
#include "muefix/common.hpp"
#include "muefix/detecting.hpp"
#include "muefix/parallel.hpp"
#include "muefix/rng.hpp"

namespace muefix::mc {

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::event_prob: return "event_prob";
    case Estimator::eta_quantiles: return "eta_quantiles";
    case Estimator::detecting_fraction: return "detecting_fraction";
    case Estimator::ber: return "ber";
    case Estimator::weight_invariance: return "weight_invariance";
    case Estimator::chi2_gof: return "chi2_gof";
  }
  return "?";
}

Estimator estimator_from_name(const std::string& name) {
  if (name == "event_prob") return Estimator::event_prob;
  if (name == "eta_quantiles") return Estimator::eta_quantiles;
  if (name == "detecting_fraction") return Estimator::detecting_fraction;
  if (name == "ber") return Estimator::ber;
  if (name == "weight_invariance") return Estimator::weight_invariance;
  if (name == "chi2_gof") return Estimator::chi2_gof;
  throw ValidationError("unknown estimator: '" + name + "'");
}

void ExperimentConfig::validate() const {
  std::string failures;
  auto fail = [&failures](const std::string& what) {
    if (!failures.empty()) failures += "; ";
    failures += what;
  };
  if (k_list.empty()) fail("k_list must be nonempty");
  for (const int k : k_list) {
    if (k < 1) {
      fail("every k must be >= 1");
      break;
    }
  }
  if (trials < 1) fail("trials must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must lie in (0,1]");
  if (!(u_exp > 1.0)) fail("u must be > 1");
  if (ensemble == Ensemble::finite_alphabet && !alphabet) fail("finite_alphabet requires an alphabet");
  if (const auto* ns = std::get_if<std::vector<int>>(&zeta_or_n)) {
    if (ns->size() != k_list.size()) fail("n_list length must match k_list");
    for (const int n : *ns) {
      if (n < 1) {
        fail("every n must be >= 1");
        break;
      }
    }
  } else if (!(std::get<double>(zeta_or_n) > 0.0)) {
    fail("zeta must be positive");
  }
  if (estimator == Estimator::ber) {
    if (sigma_list.empty()) fail("ber requires a sigma_list");
    for (const double s : sigma_list) {
      if (!(s > 0.0)) {
        fail("every sigma must be positive");
        break;
      }
    }
  }
  if ((estimator == Estimator::weight_invariance || estimator == Estimator::chi2_gof) && weight < 1) {
    fail("weight must be >= 1");
  }
  if (!failures.empty()) throw ValidationError("invalid experiment config: " + failures);
  if (alphabet) alphabet->validate();
}

int ExperimentConfig::chips_for(int point_index) const {
  if (const auto* ns = std::get_if<std::vector<int>>(&zeta_or_n)) {
    return (*ns)[static_cast<std::size_t>(point_index)];
  }
  const int k = k_list[static_cast<std::size_t>(point_index)];
  // The load is undefined at k = 1 (log3 k = 0); a single chip suffices there.
  if (k == 1) return 1;
  return chips_for_zeta(k, std::get<double>(zeta_or_n));
}

namespace {

double zeta_or_zero(int k, int n) { return k >= 2 ? zeta(k, n) : 0.0; }

SpreadingMatrix draw_matrix(const ExperimentConfig& cfg, int k, int n, std::uint64_t trial_seed) {
  switch (cfg.ensemble) {
    case Ensemble::binary_antipodal: return gen_binary_antipodal(k, n, trial_seed);
    case Ensemble::gaussian: return gen_gaussian(k, n, trial_seed);
    case Ensemble::finite_alphabet: return gen_finite_alphabet(k, n, *cfg.alphabet, trial_seed);
  }
  throw ValidationError("unknown ensemble");
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<ExperimentRecord> estimate_event_prob(const ExperimentConfig& cfg) {
  cfg.validate();
  const Rational gamma_exact(cfg.gamma);
  std::vector<ExperimentRecord> records;
  for (std::size_t point = 0; point < cfg.k_list.size(); ++point) {
    const auto start = std::chrono::steady_clock::now();
    const int k = cfg.k_list[point];
    const int n = cfg.chips_for(static_cast<int>(point));
    const std::uint64_t point_seed = rng::derive(cfg.base_seed, point);
    std::vector<std::uint8_t> hit(cfg.trials, 0);
    parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t trial) {
      const std::uint64_t trial_seed = rng::derive(point_seed, trial);
      const SpreadingMatrix h = draw_matrix(cfg, k, n, trial_seed);
      bool below;
      if (cfg.even_weight_only) {
        const EtaValue v = min_even_weight(h);
        below = v.exact ? (*v.exact < gamma_exact) : (v.value < cfg.gamma);
      } else {
        const EfficiencyResult r = eta_branch_bound(h);
        below = r.eta.exact ? (*r.eta.exact < gamma_exact) : (r.eta.value < cfg.gamma);
        if (below && cfg.ensemble == Ensemble::binary_antipodal) {
          // Parity law: an odd-weight vector can never drop below 1 >= gamma.
          if (r.argmin.weight % 2 != 0) {
            throw std::logic_error("odd-weight minimizer below gamma contradicts the parity law");
          }
        }
      }
      hit[trial] = below ? 1 : 0;
    });
    std::uint64_t count = 0;
    for (const auto b : hit) count += b;
    const auto ci = stats::wilson95(count, cfg.trials);
    ExperimentRecord rec;
    rec.k = k;
    rec.n = n;
    rec.zeta = zeta_or_zero(k, n);
    rec.gamma = cfg.gamma;
    rec.estimate = static_cast<double>(count) / static_cast<double>(cfg.trials);
    rec.ci_low = ci.low;
    rec.ci_high = ci.high;
    rec.trials = cfg.trials;
    rec.seed = point_seed;
    rec.wall_time_s = elapsed_s(start);
    records.push_back(rec);
  }
  return records;
}

std::vector<EtaQuantileRecord> eta_quantiles(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<EtaQuantileRecord> records;
  for (std::size_t point = 0; point < cfg.k_list.size(); ++point) {
    const auto start = std::chrono::steady_clock::now();
    const int k = cfg.k_list[point];
    const int n = cfg.chips_for(static_cast<int>(point));
    const std::uint64_t point_seed = rng::derive(cfg.base_seed, point);
    std::vector<double> etas(cfg.trials, 0.0);
    parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t trial) {
      const std::uint64_t trial_seed = rng::derive(point_seed, trial);
      const SpreadingMatrix h = draw_matrix(cfg, k, n, trial_seed);
      etas[trial] = eta_branch_bound(h).eta.value;
    });
    std::sort(etas.begin(), etas.end());
    EtaQuantileRecord rec;
    rec.k = k;
    rec.n = n;
    rec.zeta = zeta_or_zero(k, n);
    rec.q_min = etas.front();
    rec.q05 = stats::quantile_sorted(etas, 0.05);
    rec.q50 = stats::quantile_sorted(etas, 0.50);
    rec.q95 = stats::quantile_sorted(etas, 0.95);
    rec.trials = cfg.trials;
    rec.seed = point_seed;
    rec.wall_time_s = elapsed_s(start);
    records.push_back(rec);
  }
  return records;
}

std::vector<ExperimentRecord> detecting_fraction(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.ensemble == Ensemble::gaussian) {
    throw ValidationError("detecting_fraction: unsupported ensemble (gaussian matrices are detecting almost surely)");
  }
  std::vector<ExperimentRecord> records;
  for (std::size_t point = 0; point < cfg.k_list.size(); ++point) {
    const auto start = std::chrono::steady_clock::now();
    const int k = cfg.k_list[point];
    const int n = cfg.chips_for(static_cast<int>(point));
    const std::uint64_t point_seed = rng::derive(cfg.base_seed, point);
    std::vector<std::uint8_t> det(cfg.trials, 0);
    parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t trial) {
      const std::uint64_t trial_seed = rng::derive(point_seed, trial);
      const SpreadingMatrix h = draw_matrix(cfg, k, n, trial_seed);
      det[trial] = is_detecting(h).is_detecting ? 1 : 0;
    });
    std::uint64_t count = 0;
    for (const auto b : det) count += b;
    const auto ci = stats::wilson95(count, cfg.trials);
    ExperimentRecord rec;
    rec.k = k;
    rec.n = n;
    rec.zeta = zeta_or_zero(k, n);
    rec.gamma = cfg.gamma;
    rec.estimate = static_cast<double>(count) / static_cast<double>(cfg.trials);
    rec.ci_low = ci.low;
    rec.ci_high = ci.high;
    rec.trials = cfg.trials;
    rec.seed = point_seed;
    rec.wall_time_s = elapsed_s(start);
    records.push_back(rec);
  }
  return records;
}

std::vector<BerRecord> ber_simulate(const SpreadingMatrix& h, std::span<const double> sigmas,
                                    std::uint64_t trials, std::uint64_t seed, int threads) {
  if (trials == 0) throw ValidationError("ber_simulate: trials must be >= 1");
  if (sigmas.empty()) throw ValidationError("ber_simulate: empty sigma list");
  for (const double s : sigmas) {
    if (!(s > 0.0)) throw ValidationError("ber_simulate: sigma must be positive");
  }
  if (h.is_complex()) throw ValidationError("ber_simulate expects a real-valued matrix");

  const int k = h.n_users;
  const int n = h.n_chips;
  std::vector<BerRecord> records;
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    const auto start = std::chrono::steady_clock::now();
    const double sigma = sigmas[si];
    const std::uint64_t sigma_seed = rng::derive(seed, si);
    std::vector<std::uint32_t> errors(trials, 0);
    parallel_for(trials, threads, [&](std::uint64_t trial) {
      rng::Stream stream(rng::derive(sigma_seed, trial));
      std::vector<std::int8_t> b(static_cast<std::size_t>(k));
      for (auto& bit : b) bit = static_cast<std::int8_t>(stream.next_sign());
      std::vector<double> y(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) {
        double v = 0.0;
        for (int j = 0; j < k; ++j) v += h.fvalue(i, j) * b[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = v + sigma * stream.next_gaussian();
      }
      const auto decoded = ml_detect(h, y);
      std::uint32_t wrong = 0;
      for (int j = 0; j < k; ++j) wrong += decoded[static_cast<std::size_t>(j)] != b[static_cast<std::size_t>(j)];
      errors[trial] = wrong;
    });
    std::uint64_t total_errors = 0;
    for (const auto e : errors) total_errors += e;
    const std::uint64_t bits = trials * static_cast<std::uint64_t>(k);
    const auto ci = stats::wilson95(total_errors, bits);
    BerRecord rec;
    rec.sigma = sigma;
    rec.pe = static_cast<double>(total_errors) / static_cast<double>(bits);
    rec.ci_low = ci.low;
    rec.ci_high = ci.high;
    rec.eta_hat = total_errors == 0 ? std::numeric_limits<double>::infinity()
                                    : 2.0 * sigma * sigma * std::log(1.0 / rec.pe);
    rec.bit_errors = total_errors;
    rec.bits = bits;
    rec.trials = trials;
    rec.seed = sigma_seed;
    rec.wall_time_s = elapsed_s(start);
    records.push_back(rec);
  }
  return records;
}

std::vector<double> quadform_samples(Ensemble ensemble, const std::optional<Alphabet>& alphabet,
                                     int k, int n, const TernaryVector& pattern,
                                     std::uint64_t trials, std::uint64_t seed, int threads) {
  if (pattern.size() != k) throw ValidationError("pattern length differs from user count");
  if (pattern.is_zero()) throw ValidationError("pattern must be nonzero");
  if (ensemble == Ensemble::finite_alphabet && !alphabet) {
    throw ValidationError("finite_alphabet requires an alphabet");
  }
  ExperimentConfig cfg;
  cfg.ensemble = ensemble;
  cfg.alphabet = alphabet;
  std::vector<double> samples(trials, 0.0);
  parallel_for(trials, threads, [&](std::uint64_t trial) {
    const SpreadingMatrix h = draw_matrix(cfg, k, n, rng::derive(seed, trial));
    samples[trial] = eta_for_error_vector(h, pattern).value;
  });
  return samples;
}

stats::KsResult weight_invariance_test(Ensemble ensemble, int k, int n, const TernaryVector& a,
                                       const TernaryVector& b, std::uint64_t trials,
                                       std::uint64_t seed, int threads) {
  const auto sa = quadform_samples(ensemble, std::nullopt, k, n, a, trials, rng::derive(seed, 0), threads);
  const auto sb = quadform_samples(ensemble, std::nullopt, k, n, b, trials, rng::derive(seed, 1), threads);
  return stats::ks_two_sample(sa, sb);
}

stats::KsResult weight_invariance_test(Ensemble ensemble, int k, int n, int weight,
                                       std::uint64_t trials, std::uint64_t seed, int threads) {
  if (weight < 1 || weight > k) throw ValidationError("weight outside [1, K]");
  std::vector<std::int8_t> pa(static_cast<std::size_t>(k), 0);
  std::vector<std::int8_t> pb(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < weight; ++i) pa[static_cast<std::size_t>(i)] = 1;
  if (weight < k) {
    // Shifted support with one sign flipped, same weight.
    for (int i = 1; i < weight; ++i) pb[static_cast<std::size_t>(i)] = 1;
    pb[static_cast<std::size_t>(weight)] = -1;
  } else {
    for (int i = 0; i + 1 < weight; ++i) pb[static_cast<std::size_t>(i)] = 1;
    pb[static_cast<std::size_t>(weight - 1)] = -1;
  }
  return weight_invariance_test(ensemble, k, n, TernaryVector::from(std::move(pa)),
                                TernaryVector::from(std::move(pb)), trials, seed, threads);
}

std::vector<double> chi2_gof_samples(int k, int n, int weight_j, std::uint64_t trials,
                                     std::uint64_t seed, int threads) {
  if (weight_j < 1 || weight_j > k) throw ValidationError("weight outside [1, K]");
  std::vector<std::int8_t> p(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < weight_j; ++i) p[static_cast<std::size_t>(i)] = 1;
  auto samples = quadform_samples(Ensemble::gaussian, std::nullopt, k, n,
                                  TernaryVector::from(std::move(p)), trials, seed, threads);
  const double factor = static_cast<double>(n) / static_cast<double>(weight_j);
  for (auto& s : samples) s *= factor;
  return samples;
}

stats::KsResult chi2_gof_test(int k, int n, int weight_j, std::uint64_t trials, std::uint64_t seed,
                              int threads) {
  const auto samples = chi2_gof_samples(k, n, weight_j, trials, seed, threads);
  return stats::ks_one_sample(samples, [n](double x) { return x <= 0.0 ? 0.0 : bounds::chi2_cdf(n, x); });
}

}  // namespace muefix::mc
