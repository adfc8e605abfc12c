// SPDX-License-Identifier: Apache-2.0
#include "muefix/alphabet.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "muefix/common.hpp"

namespace muefix {

const char* scale_rule_name(ScaleRule rule) {
  return rule == ScaleRule::inv_sqrt_n ? "1/sqrt(N)" : "1/sqrt(2N)";
}

ScaleRule scale_rule_from_name(const std::string& name) {
  if (name == "1/sqrt(N)") return ScaleRule::inv_sqrt_n;
  if (name == "1/sqrt(2N)") return ScaleRule::inv_sqrt_2n;
  throw ValidationError("unknown scale rule: '" + name + "'");
}

bool Alphabet::complex_basis() const {
  return basis.size() == 2 && basis[0] == std::complex<double>(1.0, 0.0) &&
         basis[1] == std::complex<double>(0.0, 1.0);
}

bool Alphabet::real_basis() const {
  return std::all_of(basis.begin(), basis.end(), [](const auto& b) { return b.imag() == 0.0; });
}

namespace {

bool symbol_is_zero(const std::vector<Rational>& s) {
  return std::all_of(s.begin(), s.end(), [](const Rational& c) { return c == 0; });
}

std::vector<Rational> negated(const std::vector<Rational>& s) {
  std::vector<Rational> out;
  out.reserve(s.size());
  for (const Rational& c : s) out.push_back(-c);
  return out;
}

}  // namespace

void Alphabet::validate() const {
  std::string failures;
  auto fail = [&failures](const std::string& what) {
    if (!failures.empty()) failures += "; ";
    failures += what;
  };

  if (symbols.empty()) fail("no symbols");
  if (basis.empty()) fail("empty basis");
  if (probabilities.size() != symbols.size()) fail("probabilities count differs from symbol count");
  for (const auto& s : symbols) {
    if (static_cast<int>(s.size()) != dim()) {
      fail("symbol coordinate count differs from basis size");
      break;
    }
  }
  if (!failures.empty()) throw ValidationError("invalid alphabet: " + failures);

  Rational total = 0;
  bool positive = true;
  for (const Rational& p : probabilities) {
    if (p <= 0) positive = false;
    total += p;
  }
  if (!positive) fail("probabilities must be positive");
  if (total != 1) fail("probabilities sum to " + rational_str(total) + ", expected 1");

  // Symmetric: -s present with identical probability. Duplicate symbols would
  // make the pairing ambiguous, so reject them too.
  const int m = size();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (symbols[i] == symbols[j]) {
        fail("duplicate symbol");
        i = m;
        break;
      }
    }
  }
  std::vector<Rational> mean(static_cast<std::size_t>(dim()), Rational(0));
  Rational zero_mass = 0;
  bool symmetric = true;
  for (int i = 0; i < m; ++i) {
    const auto neg = negated(symbols[i]);
    bool found = false;
    for (int j = 0; j < m; ++j) {
      if (symbols[j] == neg) {
        if (probabilities[j] != probabilities[i]) symmetric = false;
        found = true;
        break;
      }
    }
    if (!found) symmetric = false;
    for (int t = 0; t < dim(); ++t) mean[static_cast<std::size_t>(t)] += probabilities[i] * symbols[i][static_cast<std::size_t>(t)];
    if (symbol_is_zero(symbols[i])) zero_mass += probabilities[i];
  }
  if (!symmetric) fail("not symmetric: some symbol lacks -s at equal probability");
  if (std::any_of(mean.begin(), mean.end(), [](const Rational& c) { return c != 0; })) {
    fail("nonzero mean");
  }
  if (zero_mass >= 1) fail("degenerate: all probability mass at 0");

  if (!failures.empty()) throw ValidationError("invalid alphabet: " + failures);
}

Alphabet make_alphabet(std::vector<std::vector<Rational>> symbols, std::vector<Rational> probabilities,
                       std::vector<std::complex<double>> basis, ScaleRule rule) {
  Alphabet a;
  a.symbols = std::move(symbols);
  a.probabilities = std::move(probabilities);
  a.basis = std::move(basis);
  a.scale_rule = rule;
  for (auto& p : a.probabilities) p.canonicalize();
  for (auto& s : a.symbols) {
    for (auto& c : s) c.canonicalize();
  }
  a.validate();
  return a;
}

Alphabet binary_antipodal_alphabet() {
  return make_alphabet({{Rational(1)}, {Rational(-1)}}, {Rational(1, 2), Rational(1, 2)});
}

Alphabet qpsk_alphabet() {
  return make_alphabet(
      {{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}, {Rational(-1), Rational(1)}, {Rational(-1), Rational(-1)}},
      {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)},
      {{1.0, 0.0}, {0.0, 1.0}}, ScaleRule::inv_sqrt_2n);
}

int alphabet_rank(const Alphabet& alphabet) {
  alphabet.validate();
  const int m = alphabet.size();
  const int d = alphabet.dim();
  // Fraction-free (Bareiss) elimination on the denominator-cleared
  // coordinate matrix; row/column pivot search keeps it rank-revealing.
  std::vector<BigInt> a(static_cast<std::size_t>(m) * d);
  for (int i = 0; i < m; ++i) {
    BigInt lcm = 1;
    for (int t = 0; t < d; ++t) lcm = ::lcm(lcm, alphabet.symbols[i][t].get_den());
    for (int t = 0; t < d; ++t) {
      const Rational& c = alphabet.symbols[i][t];
      a[static_cast<std::size_t>(i) * d + t] = c.get_num() * (lcm / c.get_den());
    }
  }
  auto at = [&](int i, int j) -> BigInt& { return a[static_cast<std::size_t>(i) * d + j]; };

  int rank = 0;
  BigInt prev = 1;
  for (int col = 0; col < d && rank < m; ++col) {
    int pivot = -1;
    for (int i = rank; i < m; ++i) {
      if (at(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int j = 0; j < d; ++j) std::swap(at(pivot, j), at(rank, j));
    }
    for (int i = rank + 1; i < m; ++i) {
      for (int j = col + 1; j < d; ++j) {
        at(i, j) = (at(i, j) * at(rank, col) - at(i, col) * at(rank, j)) / prev;
      }
      at(i, col) = 0;
    }
    prev = at(rank, col);
    ++rank;
  }
  return rank;
}

ExactSymbolCoords exact_symbol_coords(const Alphabet& alphabet) {
  const int m = alphabet.size();
  const int d = alphabet.dim();
  BigInt lcm = 1;
  for (const auto& s : alphabet.symbols) {
    for (const auto& c : s) lcm = ::lcm(lcm, c.get_den());
  }
  if (!lcm.fits_slong_p() || lcm.get_si() > (std::int64_t{1} << 31)) {
    throw ValidationError("alphabet denominators too large for the exact kernel");
  }
  ExactSymbolCoords out;
  out.dim = d;
  out.denom = lcm.get_si();
  out.coords.resize(static_cast<std::size_t>(m) * d);
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < d; ++t) {
      const Rational& c = alphabet.symbols[i][static_cast<std::size_t>(t)];
      BigInt scaled = c.get_num() * (lcm / c.get_den());
      if (!scaled.fits_slong_p() || std::abs(scaled.get_si()) > (std::int64_t{1} << 31)) {
        throw ValidationError("alphabet coordinates too large for the exact kernel");
      }
      out.coords[static_cast<std::size_t>(i) * d + t] = scaled.get_si();
    }
  }
  return out;
}

std::vector<unsigned __int128> sampling_thresholds(const Alphabet& alphabet) {
  std::vector<unsigned __int128> out;
  out.reserve(alphabet.symbols.size());
  Rational cum = 0;
  const BigInt two64 = BigInt(1) << 64;
  for (const Rational& p : alphabet.probabilities) {
    cum += p;
    BigInt scaled = (cum.get_num() * two64) / cum.get_den();  // floor
    unsigned __int128 t = 0;
    for (int limb = 1; limb >= 0; --limb) {
      BigInt part = (scaled >> (64 * limb)) & BigInt((unsigned long)~0ull);
      t = (t << 64) | static_cast<unsigned __int128>(part.get_ui());
    }
    out.push_back(t);
  }
  out.back() = static_cast<unsigned __int128>(1) << 64;  // close the last bucket
  return out;
}

}  // namespace muefix
