// SPDX-License-Identifier: Apache-2.0
#include "muefix/serialize.hpp"

#include <string>

#include "muefix/common.hpp"

namespace muefix {

json alphabet_to_json(const Alphabet& a) {
  json symbols = json::array();
  for (const auto& s : a.symbols) {
    json coords = json::array();
    for (const auto& c : s) coords.push_back(rational_str(c));
    symbols.push_back(coords);
  }
  json probs = json::array();
  for (const auto& p : a.probabilities) probs.push_back(rational_str(p));
  json basis = json::array();
  for (const auto& b : a.basis) basis.push_back(json::array({b.real(), b.imag()}));
  return json{{"symbols", symbols},
              {"probabilities", probs},
              {"basis", basis},
              {"scale_rule", scale_rule_name(a.scale_rule)}};
}

Alphabet alphabet_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("alphabet: expected an object");
  for (const char* field : {"symbols", "probabilities"}) {
    if (!j.contains(field)) throw ValidationError(std::string("alphabet: missing field '") + field + "'");
  }
  std::vector<std::vector<Rational>> symbols;
  for (const auto& s : j.at("symbols")) {
    std::vector<Rational> coords;
    for (const auto& c : s) coords.push_back(parse_rational(c.get<std::string>()));
    symbols.push_back(std::move(coords));
  }
  std::vector<Rational> probs;
  for (const auto& p : j.at("probabilities")) probs.push_back(parse_rational(p.get<std::string>()));
  std::vector<std::complex<double>> basis{{1.0, 0.0}};
  if (j.contains("basis")) {
    basis.clear();
    for (const auto& b : j.at("basis")) {
      basis.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
    }
  }
  ScaleRule rule = ScaleRule::inv_sqrt_n;
  if (j.contains("scale_rule")) rule = scale_rule_from_name(j.at("scale_rule").get<std::string>());
  return make_alphabet(std::move(symbols), std::move(probs), std::move(basis), rule);
}

json matrix_to_json(const SpreadingMatrix& h) {
  json out{{"n", h.n_chips},
           {"k", h.n_users},
           {"ensemble", ensemble_name(h.ensemble)},
           {"seed", h.seed}};
  out["alphabet"] = h.alphabet ? alphabet_to_json(*h.alphabet) : json(nullptr);
  out["entries_exact"] = h.has_exact() ? json(h.entries_exact) : json(nullptr);
  out["entries_float"] = h.entries_float;
  return out;
}

SpreadingMatrix matrix_from_json(const json& j) {
  for (const char* field : {"n", "k", "ensemble", "seed", "entries_float"}) {
    if (!j.contains(field)) throw ValidationError(std::string("matrix: missing field '") + field + "'");
  }
  SpreadingMatrix h;
  h.n_chips = j.at("n").get<int>();
  h.n_users = j.at("k").get<int>();
  h.ensemble = ensemble_from_name(j.at("ensemble").get<std::string>());
  h.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("alphabet") && !j.at("alphabet").is_null()) {
    h.alphabet = alphabet_from_json(j.at("alphabet"));
  }
  if (j.contains("entries_exact") && !j.at("entries_exact").is_null()) {
    h.entries_exact = j.at("entries_exact").get<std::vector<std::int32_t>>();
  }
  h.entries_float = j.at("entries_float").get<std::vector<double>>();

  if (h.n_chips < 1 || h.n_users < 1) throw ValidationError("matrix: dimensions must be positive");
  const std::size_t cells = static_cast<std::size_t>(h.n_chips) * h.n_users;
  if (h.has_exact()) {
    if (!h.alphabet) throw ValidationError("matrix: exact entries require an alphabet");
    if (h.entries_exact.size() != cells) throw ValidationError("matrix: entries_exact size mismatch");
    for (const auto s : h.entries_exact) {
      if (s < 0 || s >= h.alphabet->size()) throw ValidationError("matrix: symbol index out of range");
    }
  }
  if (h.entries_float.size() != cells * h.planes()) {
    throw ValidationError("matrix: entries_float size mismatch");
  }
  return h;
}

json efficiency_to_json(const EfficiencyResult& r) {
  json argmin = json::array();
  for (const auto e : r.argmin.entries) argmin.push_back(static_cast<int>(e));
  return json{{"eta", r.eta.value},
              {"argmin", argmin},
              {"examined", r.vectors_examined},
              {"pruned", r.nodes_pruned},
              {"method", method_name(r.method)}};
}

json verdict_to_json(const DetectingVerdict& v) {
  json witness(nullptr);
  if (v.witness) {
    witness = json::array();
    for (const auto e : v.witness->entries) witness.push_back(static_cast<int>(e));
  }
  return json{{"detecting", v.is_detecting}, {"witness", witness}, {"cost", v.search_cost}};
}

json bound_to_json(const bounds::BoundEvaluation& b) {
  json terms = json::array();
  for (const auto& t : b.terms) terms.push_back(json::array({t.j, t.term_log2}));
  json split(nullptr);
  if (b.split) {
    split = json{{"first_log2", b.split->first_log2},
                 {"second_log2", b.split->second_log2},
                 {"j_split", b.split->j_split}};
  }
  return json{{"value_log2", b.value_log2},
              {"terms", terms},
              {"split", split},
              {"params", json{{"k", b.params.k}, {"n", b.params.n}, {"gamma", b.params.gamma}, {"u", b.params.u}}}};
}

json records_to_json(const std::vector<mc::ExperimentRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    out.push_back(json{{"k", r.k},
                       {"n", r.n},
                       {"zeta", r.zeta},
                       {"gamma", r.gamma},
                       {"estimate", r.estimate},
                       {"ci_low", r.ci_low},
                       {"ci_high", r.ci_high},
                       {"trials", r.trials},
                       {"seed", r.seed}});
  }
  return out;
}

json records_to_json(const std::vector<mc::EtaQuantileRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    out.push_back(json{{"k", r.k},
                       {"n", r.n},
                       {"zeta", r.zeta},
                       {"q_min", r.q_min},
                       {"q05", r.q05},
                       {"q50", r.q50},
                       {"q95", r.q95},
                       {"trials", r.trials},
                       {"seed", r.seed}});
  }
  return out;
}

json records_to_json(const std::vector<mc::BerRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    out.push_back(json{{"sigma", r.sigma},
                       {"pe", r.pe},
                       {"ci_low", r.ci_low},
                       {"ci_high", r.ci_high},
                       {"eta_hat", r.eta_hat},
                       {"bit_errors", r.bit_errors},
                       {"bits", r.bits},
                       {"trials", r.trials},
                       {"seed", r.seed}});
  }
  return out;
}

mc::ExperimentConfig config_from_json(const json& j) {
  std::string failures;
  auto fail = [&failures](const std::string& what) {
    if (!failures.empty()) failures += "; ";
    failures += what;
  };
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  mc::ExperimentConfig cfg;
  if (!j.contains("estimator")) fail("missing field 'estimator'");
  if (!j.contains("k_list")) fail("missing field 'k_list'");
  if (!j.contains("zeta") && !j.contains("n_list")) fail("missing field 'zeta' or 'n_list'");
  if (j.contains("zeta") && j.contains("n_list")) fail("'zeta' and 'n_list' are mutually exclusive");
  if (!failures.empty()) throw ValidationError("invalid experiment config: " + failures);

  cfg.estimator = mc::estimator_from_name(j.at("estimator").get<std::string>());
  cfg.k_list = j.at("k_list").get<std::vector<int>>();
  if (j.contains("zeta")) {
    cfg.zeta_or_n = j.at("zeta").get<double>();
  } else {
    cfg.zeta_or_n = j.at("n_list").get<std::vector<int>>();
  }
  if (j.contains("ensemble")) cfg.ensemble = ensemble_from_name(j.at("ensemble").get<std::string>());
  if (j.contains("alphabet") && !j.at("alphabet").is_null()) {
    cfg.alphabet = alphabet_from_json(j.at("alphabet"));
  }
  if (cfg.ensemble == Ensemble::binary_antipodal && !cfg.alphabet) {
    cfg.alphabet = binary_antipodal_alphabet();
  }
  if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
  if (j.contains("u")) cfg.u_exp = j.at("u").get<double>();
  if (j.contains("trials")) cfg.trials = j.at("trials").get<std::uint64_t>();
  if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("even_weight_only")) cfg.even_weight_only = j.at("even_weight_only").get<bool>();
  if (j.contains("sigma_list")) cfg.sigma_list = j.at("sigma_list").get<std::vector<double>>();
  if (j.contains("weight")) cfg.weight = j.at("weight").get<int>();
  cfg.validate();
  return cfg;
}

}  // namespace muefix
