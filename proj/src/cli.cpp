// SPDX-License-Identifier: Apache-2.0
#include "muefix/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "muefix/bounds.hpp"
#include "muefix/common.hpp"
#include "muefix/detecting.hpp"
#include "muefix/efficiency.hpp"
#include "muefix/parallel.hpp"
#include "muefix/rng.hpp"
#include "muefix/serialize.hpp"

namespace muefix::cli {

namespace {

// Log2-domain and probability columns carry 12 significant digits; enough to
// reproduce across toolchains without pretending to full bit-exactness of
// transcendentals.
std::string fmt12(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ValidationError("cannot write file: " + out_path);
  f << text;
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("invalid JSON in " + what);
  return j;
}

Alphabet load_alphabet_spec(const std::string& spec) {
  if (spec == "pm1") return binary_antipodal_alphabet();
  if (spec == "qpsk") return qpsk_alphabet();
  return alphabet_from_json(parse_json(read_file(spec), spec));
}

struct MatrixFlags {
  std::string ensemble = "binary";
  int k = 0, n = 0;
  std::uint64_t seed = 0;
  std::string alphabet_spec;
  std::string in_path;
};

void add_matrix_flags(CLI::App* cmd, MatrixFlags& f, bool need_dims = true) {
  cmd->add_option("--ensemble", f.ensemble, "binary | gaussian | finite");
  auto* k = cmd->add_option("--k", f.k, "user count");
  auto* n = cmd->add_option("--n", f.n, "chip count");
  cmd->add_option("--seed", f.seed, "generator seed");
  cmd->add_option("--alphabet", f.alphabet_spec, "pm1 | qpsk | path to alphabet JSON");
  cmd->add_option("--in", f.in_path, "load a serialized matrix instead of generating");
  if (need_dims) {
    k->default_val(0);
    n->default_val(0);
  }
}

SpreadingMatrix matrix_from_flags(const MatrixFlags& f) {
  if (!f.in_path.empty()) return matrix_from_json(parse_json(read_file(f.in_path), f.in_path));
  if (f.k < 1 || f.n < 1) throw ValidationError("--k and --n are required when no --in file is given");
  switch (ensemble_from_name(f.ensemble)) {
    case Ensemble::binary_antipodal: return gen_binary_antipodal(f.k, f.n, f.seed);
    case Ensemble::gaussian: return gen_gaussian(f.k, f.n, f.seed);
    case Ensemble::finite_alphabet: {
      if (f.alphabet_spec.empty()) throw ValidationError("finite ensemble requires --alphabet");
      return gen_finite_alphabet(f.k, f.n, load_alphabet_spec(f.alphabet_spec), f.seed);
    }
  }
  throw ValidationError("unknown ensemble");
}

std::string records_csv(const std::vector<mc::ExperimentRecord>& records) {
  std::string out = "k,n,zeta,gamma,estimate,ci_low,ci_high,trials,seed\n";
  for (const auto& r : records) {
    out += std::to_string(r.k) + "," + std::to_string(r.n) + "," + fmt12(r.zeta) + "," +
           fmt12(r.gamma) + "," + fmt12(r.estimate) + "," + fmt12(r.ci_low) + "," +
           fmt12(r.ci_high) + "," + std::to_string(r.trials) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

std::string records_csv(const std::vector<mc::EtaQuantileRecord>& records) {
  std::string out = "k,n,zeta,q_min,q05,q50,q95,trials,seed\n";
  for (const auto& r : records) {
    out += std::to_string(r.k) + "," + std::to_string(r.n) + "," + fmt12(r.zeta) + "," +
           fmt12(r.q_min) + "," + fmt12(r.q05) + "," + fmt12(r.q50) + "," + fmt12(r.q95) + "," +
           std::to_string(r.trials) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

std::string records_csv(const std::vector<mc::BerRecord>& records, const std::string& prefix_cols,
                        const std::string& prefix_vals) {
  std::string out = prefix_cols + "sigma,pe,ci_low,ci_high,eta_hat,bit_errors,bits,trials,seed\n";
  for (const auto& r : records) {
    out += prefix_vals + fmt12(r.sigma) + "," + fmt12(r.pe) + "," + fmt12(r.ci_low) + "," +
           fmt12(r.ci_high) + "," + fmt12(r.eta_hat) + "," + std::to_string(r.bit_errors) + "," +
           std::to_string(r.bits) + "," + std::to_string(r.trials) + "," + std::to_string(r.seed) +
           "\n";
  }
  return out;
}

std::string run_sweep(const mc::ExperimentConfig& cfg, const std::string& format) {
  const bool csv = format == "csv";
  switch (cfg.estimator) {
    case mc::Estimator::event_prob: {
      auto records = mc::estimate_event_prob(cfg);
      return csv ? records_csv(records)
                 : json{{"estimator", "event_prob"}, {"records", records_to_json(records)}}.dump(2) + "\n";
    }
    case mc::Estimator::detecting_fraction: {
      auto records = mc::detecting_fraction(cfg);
      return csv ? records_csv(records)
                 : json{{"estimator", "detecting_fraction"}, {"records", records_to_json(records)}}.dump(2) + "\n";
    }
    case mc::Estimator::eta_quantiles: {
      auto records = mc::eta_quantiles(cfg);
      return csv ? records_csv(records)
                 : json{{"estimator", "eta_quantiles"}, {"records", records_to_json(records)}}.dump(2) + "\n";
    }
    case mc::Estimator::ber: {
      std::string out = "k,n,sigma,pe,ci_low,ci_high,eta_hat,bit_errors,bits,trials,seed\n";
      json all = json::array();
      for (std::size_t point = 0; point < cfg.k_list.size(); ++point) {
        const int k = cfg.k_list[point];
        const int n = cfg.chips_for(static_cast<int>(point));
        const std::uint64_t point_seed = rng::derive(cfg.base_seed, point);
        SpreadingMatrix h;
        switch (cfg.ensemble) {
          case Ensemble::binary_antipodal: h = gen_binary_antipodal(k, n, point_seed); break;
          case Ensemble::gaussian: h = gen_gaussian(k, n, point_seed); break;
          case Ensemble::finite_alphabet: h = gen_finite_alphabet(k, n, *cfg.alphabet, point_seed); break;
        }
        auto records = mc::ber_simulate(h, cfg.sigma_list, cfg.trials, point_seed, cfg.threads);
        if (csv) {
          const std::string prefix = std::to_string(k) + "," + std::to_string(n) + ",";
          std::string block = records_csv(records, "", prefix);
          out += block.substr(block.find('\n') + 1);  // drop the repeated header
        } else {
          all.push_back(json{{"k", k}, {"n", n}, {"records", records_to_json(records)}});
        }
      }
      return csv ? out : json{{"estimator", "ber"}, {"points", all}}.dump(2) + "\n";
    }
    case mc::Estimator::weight_invariance:
    case mc::Estimator::chi2_gof: {
      const bool gof = cfg.estimator == mc::Estimator::chi2_gof;
      std::string out = "k,n,zeta,weight,statistic,p_value,pass,trials,seed\n";
      json all = json::array();
      for (std::size_t point = 0; point < cfg.k_list.size(); ++point) {
        const int k = cfg.k_list[point];
        const int n = cfg.chips_for(static_cast<int>(point));
        const std::uint64_t point_seed = rng::derive(cfg.base_seed, point);
        const auto ks = gof ? mc::chi2_gof_test(k, n, cfg.weight, cfg.trials, point_seed, cfg.threads)
                            : mc::weight_invariance_test(cfg.ensemble, k, n, cfg.weight, cfg.trials,
                                                         point_seed, cfg.threads);
        const double z = k >= 2 ? zeta(k, n) : 0.0;
        if (csv) {
          out += std::to_string(k) + "," + std::to_string(n) + "," + fmt12(z) + "," +
                 std::to_string(cfg.weight) + "," + fmt12(ks.statistic) + "," + fmt12(ks.p_value) +
                 "," + (ks.pass_1pct ? "1" : "0") + "," + std::to_string(cfg.trials) + "," +
                 std::to_string(point_seed) + "\n";
        } else {
          all.push_back(json{{"k", k},
                             {"n", n},
                             {"zeta", z},
                             {"weight", cfg.weight},
                             {"statistic", ks.statistic},
                             {"p_value", ks.p_value},
                             {"pass", ks.pass_1pct},
                             {"trials", cfg.trials},
                             {"seed", point_seed}});
        }
      }
      return csv ? out : json{{"estimator", estimator_name(cfg.estimator)}, {"records", all}}.dump(2) + "\n";
    }
  }
  throw ValidationError("unknown estimator");
}

}  // namespace

mc::ExperimentConfig load_config(const std::string& path) {
  return config_from_json(parse_json(read_file(path), path));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"optimum asymptotic multiuser efficiency toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker cap for the parallel estimators (default: MUEFIX_THREADS or all cores)");

  std::string out_path;
  app.add_option("--out", out_path, "write output to a file instead of stdout");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate and serialize a spreading matrix");
  MatrixFlags gen_flags;
  add_matrix_flags(gen_cmd, gen_flags);

  // eta
  auto* eta_cmd = app.add_subcommand("eta", "exact optimum asymptotic multiuser efficiency");
  MatrixFlags eta_flags;
  add_matrix_flags(eta_cmd, eta_flags);
  std::string eta_method = "bb";
  int eta_cap = 20;
  eta_cmd->add_option("--method", eta_method, "bb | brute");
  eta_cmd->add_option("--cap", eta_cap, "brute-force user cap (default 20)");

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "exact detecting-matrix verdict");
  MatrixFlags detect_flags;
  add_matrix_flags(detect_cmd, detect_flags);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form union-bound tables");
  std::string bounds_family = "binary";
  std::int64_t bk = 0, bn = 0;
  double bgamma = 1.0, bu = 1.5, g1_threshold = 0.0;
  std::string bounds_format = "csv";
  bounds_cmd->add_option("--family", bounds_family, "binary | gaussian");
  bounds_cmd->add_option("--k", bk, "user count")->required();
  bounds_cmd->add_option("--n", bn, "chip count")->required();
  bounds_cmd->add_option("--gamma", bgamma, "threshold gamma in (0,1] (binary family)");
  bounds_cmd->add_option("--u", bu, "split exponent u > 1");
  bounds_cmd->add_option("--g1-threshold", g1_threshold,
                         "emit the weight-1 Gaussian diagnostic at this threshold (JSON only)");
  bounds_cmd->add_option("--format", bounds_format, "csv | json");

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "lower-bound curve versus zeta");
  double zeta_min = 0.05, zeta_max = 1.0;
  int steps = 96;
  curve_cmd->add_option("--zeta-min", zeta_min, "grid start (exclusive of 0)");
  curve_cmd->add_option("--zeta-max", zeta_max, "grid end");
  curve_cmd->add_option("--steps", steps, "number of grid points (endpoints included)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment config");
  std::string config_path, sweep_format = "csv";
  sweep_cmd->add_option("--config", config_path, "experiment config JSON")->required();
  sweep_cmd->add_option("--format", sweep_format, "csv | json");

  // ber
  auto* ber_cmd = app.add_subcommand("ber", "bit error rate / efficiency slope experiment");
  MatrixFlags ber_flags;
  add_matrix_flags(ber_cmd, ber_flags);
  std::vector<double> sigmas{1.0, 0.7, 0.5};
  std::uint64_t ber_trials = 10000;
  std::string ber_format = "csv";
  ber_cmd->add_option("--sigma", sigmas, "noise levels");
  ber_cmd->add_option("--trials", ber_trials, "trials per sigma");
  ber_cmd->add_option("--format", ber_format, "csv | json");

  auto* selftest_cmd = app.add_subcommand("selftest", "run the library invariant battery");

  // --threads/--out live on the parent; let subcommands hand them back up.
  for (auto* sc : {gen_cmd, eta_cmd, detect_cmd, bounds_cmd, curve_cmd, sweep_cmd, ber_cmd, selftest_cmd}) {
    sc->fallthrough();
  }

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage;
    const int code = app.exit(e, usage, usage);
    (code == 0 ? out : err) << usage.str();
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen_cmd->parsed()) {
      const SpreadingMatrix h = matrix_from_flags(gen_flags);
      emit(matrix_to_json(h).dump(2) + "\n", out_path, out);
    } else if (eta_cmd->parsed()) {
      const SpreadingMatrix h = matrix_from_flags(eta_flags);
      SearchOptions opts;
      opts.bruteforce_user_cap = eta_cap;
      EfficiencyResult r;
      if (eta_method == "brute") {
        r = eta_bruteforce(h, opts);
      } else if (eta_method == "bb") {
        r = eta_branch_bound(h, opts);
      } else {
        throw ValidationError("unknown --method: '" + eta_method + "'");
      }
      emit(efficiency_to_json(r).dump(2) + "\n", out_path, out);
    } else if (detect_cmd->parsed()) {
      const SpreadingMatrix h = matrix_from_flags(detect_flags);
      emit(verdict_to_json(is_detecting(h)).dump(2) + "\n", out_path, out);
    } else if (bounds_cmd->parsed()) {
      bounds::BoundEvaluation eval;
      if (bounds_family == "binary") {
        eval = bounds::union_bound_binary(bk, bn, bu, bgamma);
      } else if (bounds_family == "gaussian") {
        eval = bounds::union_bound_gaussian(bk, bn, bu);
      } else {
        throw ValidationError("unknown --family: '" + bounds_family + "'");
      }
      if (bounds_format == "csv") {
        std::string table = "j,term_log2\n";
        for (const auto& t : eval.terms) {
          table += std::to_string(t.j) + "," + fmt12(t.term_log2) + "\n";
        }
        emit(table, out_path, out);
      } else if (bounds_format == "json") {
        json j = bound_to_json(eval);
        if (bounds_family == "gaussian" && g1_threshold > 0.0) {
          const double p1 = bounds::gaussian_weight_prob(static_cast<int>(bn), 1, g1_threshold);
          j["g1_weight1_prob"] = p1;
          j["g1_union"] = 2.0 * static_cast<double>(bk) * p1;
        }
        emit(j.dump(2) + "\n", out_path, out);
      } else {
        throw ValidationError("unknown --format: '" + bounds_format + "'");
      }
    } else if (curve_cmd->parsed()) {
      if (steps < 1) throw ValidationError("curve: steps must be >= 1");
      if (!(zeta_min > 0.0) || zeta_max < zeta_min) throw ValidationError("curve: bad zeta range");
      std::string table = "zeta,eta_bound,tag\n";
      for (int i = 0; i < steps; ++i) {
        const double z = steps == 1 ? zeta_min
                                    : zeta_min + (zeta_max - zeta_min) * static_cast<double>(i) /
                                          static_cast<double>(steps - 1);
        const auto pt = bounds::fig1_lower_bound(z);
        table += fmt12(pt.zeta) + ",";
        if (pt.eta_bound) table += fmt12(*pt.eta_bound);
        table += std::string(",") + bounds::curve_tag_name(pt.tag) + "\n";
      }
      emit(table, out_path, out);
    } else if (sweep_cmd->parsed()) {
      mc::ExperimentConfig cfg = load_config(config_path);
      cfg.threads = threads;
      if (sweep_format != "csv" && sweep_format != "json") {
        throw ValidationError("unknown --format: '" + sweep_format + "'");
      }
      emit(run_sweep(cfg, sweep_format), out_path, out);
    } else if (ber_cmd->parsed()) {
      const SpreadingMatrix h = matrix_from_flags(ber_flags);
      auto records = mc::ber_simulate(h, sigmas, ber_trials, ber_flags.seed, threads);
      if (ber_format == "csv") {
        emit(records_csv(records, "", ""), out_path, out);
      } else if (ber_format == "json") {
        emit(json{{"records", records_to_json(records)}}.dump(2) + "\n", out_path, out);
      } else {
        throw ValidationError("unknown --format: '" + ber_format + "'");
      }
    } else if (selftest_cmd->parsed()) {
      return selftest(out) ? 0 : 1;
    }
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace muefix::cli
