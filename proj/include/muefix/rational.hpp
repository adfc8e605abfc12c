// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace muefix {

using Rational = mpq_class;
using BigInt = mpz_class;

// Parses "p", "-p" or "p/q" (base 10) into a canonical rational.
Rational parse_rational(const std::string& text);

// Canonical "p" or "p/q" form, inverse of parse_rational.
std::string rational_str(const Rational& value);

BigInt int128_to_bigint(__int128 value);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace muefix
