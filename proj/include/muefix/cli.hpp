// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "muefix/montecarlo.hpp"

namespace muefix::cli {

// Runs one invocation: gen | eta | detect | bounds | curve | sweep | ber |
// selftest. Returns 0 on success, 1 on validation/usage errors, 2 on
// capacity errors. Output goes to `out` unless the subcommand wrote to a
// --out file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

// Reads and validates an experiment config; throws ValidationError listing
// every missing field and violated invariant.
mc::ExperimentConfig load_config(const std::string& path);

// Quick library invariant battery; returns true iff everything holds.
bool selftest(std::ostream& out);

}  // namespace muefix::cli
