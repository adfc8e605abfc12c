// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "muefix/bounds.hpp"
#include "muefix/detecting.hpp"
#include "muefix/efficiency.hpp"
#include "muefix/matrix.hpp"
#include "muefix/montecarlo.hpp"

namespace muefix {

using json = nlohmann::json;

json alphabet_to_json(const Alphabet& a);
Alphabet alphabet_from_json(const json& j);

// {"n","k","ensemble","seed","alphabet","entries_exact","entries_float"};
// exact entries round-trip bit-exactly (symbol indices), float entries via
// shortest-round-trip doubles. Complex matrices interleave (re, im).
json matrix_to_json(const SpreadingMatrix& h);
SpreadingMatrix matrix_from_json(const json& j);

// {"eta","argmin","examined","pruned","method"}
json efficiency_to_json(const EfficiencyResult& r);

// {"detecting","witness","cost"}
json verdict_to_json(const DetectingVerdict& v);

// BoundEvaluation fields, terms as [j, term_log2] pairs.
json bound_to_json(const bounds::BoundEvaluation& b);

json records_to_json(const std::vector<mc::ExperimentRecord>& records);
json records_to_json(const std::vector<mc::EtaQuantileRecord>& records);
json records_to_json(const std::vector<mc::BerRecord>& records);

mc::ExperimentConfig config_from_json(const json& j);

}  // namespace muefix
