// SPDX-License-Identifier: Apache-2.0
#include "muefix/rational.hpp"

#include "muefix/common.hpp"

namespace muefix {

Rational parse_rational(const std::string& text) {
  mpq_class q;
  if (text.empty() || q.set_str(text, 10) != 0) {
    throw ValidationError("not a rational: '" + text + "'");
  }
  if (q.get_den() == 0) throw ValidationError("zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

std::string rational_str(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

BigInt int128_to_bigint(__int128 value) {
  const bool neg = value < 0;
  unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(value) : value;
  BigInt hi(static_cast<unsigned long>(mag >> 64));
  BigInt result = (hi << 64) + static_cast<unsigned long>(mag & ~0ull);
  return neg ? BigInt(-result) : result;
}

}  // namespace muefix
