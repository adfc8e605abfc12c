// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "muefix/common.hpp"
#include "muefix/rng.hpp"
#include "muefix/serialize.hpp"
#include "muefix/stats.hpp"

using namespace muefix;

TEST_SUITE_BEGIN("matrix");

TEST_CASE("binary antipodal columns have unit norm exactly") {
  const auto h = gen_binary_antipodal(1, 4, 99);
  const auto g = gram(h);
  REQUIRE(g.has_exact());
  // exact_r = N * R, so a unit column shows up as exactly N.
  CHECK(g.exact_r[0] == Rational(4));
  CHECK(g.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("generation is deterministic in the seed") {
  const auto a = gen_binary_antipodal(3, 5, 7);
  const auto b = gen_binary_antipodal(3, 5, 7);
  CHECK(a.entries_exact == b.entries_exact);
  CHECK(a.entries_float == b.entries_float);
  const auto g1 = gen_gaussian(2, 2, 3);
  const auto g2 = gen_gaussian(2, 2, 3);
  CHECK(g1.entries_float == g2.entries_float);
}

TEST_CASE("binary entry mean concentrates (3 sigma at 64x64)") {
  const auto h = gen_binary_antipodal(64, 64, 1);
  const auto view = exact_view(h);
  long sum = 0;
  for (const auto c : view.coords) sum += c;
  const double mean = static_cast<double>(sum) / 4096.0;
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(4096.0));
}

TEST_CASE("sqrt(N) * H is a +-1 integer matrix for binary antipodal") {
  const auto h = gen_binary_antipodal(6, 9, 5);
  const auto view = exact_view(h);
  CHECK(view.denom == 1);
  const double root_n = std::sqrt(9.0);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 6; ++j) {
      const auto c = view.column(j)[static_cast<std::size_t>(i)];
      CHECK((c == 1 || c == -1));
      CHECK(h.fvalue(i, j) * root_n == doctest::Approx(static_cast<double>(c)).epsilon(1e-14));
    }
  }
}

TEST_CASE("gaussian column norm concentrates at large N") {
  const auto h = gen_gaussian(1, 10000, 8);
  double norm = 0.0;
  for (int i = 0; i < 10000; ++i) norm += h.fvalue(i, 0) * h.fvalue(i, 0);
  CHECK(norm > 0.9);
  CHECK(norm < 1.1);
}

TEST_CASE("pooled gaussian entries pass a KS test against N(0, 1/N)") {
  const int n = 10000, k = 50;
  const auto h = gen_gaussian(k, n, 31);
  std::vector<double> pooled(h.entries_float);
  const double sd = 1.0 / std::sqrt(static_cast<double>(n));
  double d = 0.0;
  std::sort(pooled.begin(), pooled.end());
  const double m = static_cast<double>(pooled.size());
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    const double f = 1.0 - stats::q_function(pooled[i] / sd);
    d = std::max(d, std::max(f - static_cast<double>(i) / m, static_cast<double>(i + 1) / m - f));
  }
  CHECK(d < 1.358 / std::sqrt(m));  // 5% critical value
}

TEST_CASE("finite {+-1} alphabet reproduces the binary antipodal ensemble") {
  const auto a = gen_binary_antipodal(5, 6, 12);
  const auto b = gen_finite_alphabet(5, 6, binary_antipodal_alphabet(), 12);
  CHECK(a.entries_exact == b.entries_exact);
  CHECK(a.entries_float == b.entries_float);
  CHECK(b.ensemble == Ensemble::finite_alphabet);
}

TEST_CASE("asymmetric alphabets are rejected with a named failure") {
  CHECK_THROWS_WITH_AS(
      make_alphabet({{Rational(1)}, {Rational(-1)}}, {Rational(3, 5), Rational(2, 5)}),
      doctest::Contains("not symmetric"), ValidationError);
  CHECK_THROWS_WITH_AS(
      make_alphabet({{Rational(1)}, {Rational(-1)}}, {Rational(1, 2), Rational(1, 3)}),
      doctest::Contains("sum"), ValidationError);
  CHECK_THROWS_WITH_AS(make_alphabet({{Rational(0)}}, {Rational(1)}),
                       doctest::Contains("degenerate"), ValidationError);
}

TEST_CASE("qpsk entries all sit at modulus 1/sqrt(N)") {
  const int n = 4, k = 4;
  const auto h = gen_finite_alphabet(k, n, qpsk_alphabet(), 3);
  REQUIRE(h.is_complex());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      const double re = h.fvalue(i, j, 0);
      const double im = h.fvalue(i, j, 1);
      // |(+-1 +- i)| / sqrt(2N) = 1/sqrt(N)
      CHECK(std::sqrt(re * re + im * im) == doctest::Approx(1.0 / std::sqrt(4.0)).epsilon(1e-14));
    }
  }
}

TEST_CASE("gram of orthogonal columns is the identity") {
  const auto h = test::binary_from_signs(2, 2, {1, 1, 1, -1});
  const auto g = gram(h);
  CHECK(g.exact_r[0] == Rational(2));
  CHECK(g.exact_r[1] == Rational(0));
  CHECK(g.exact_r[3] == Rational(2));
  CHECK(g.at(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("gram sees duplicated columns") {
  const auto h = test::binary_from_signs(3, 2, {1, 1, -1, -1, 1, 1});
  const auto g = gram(h);
  CHECK(g.exact_r[0] == g.exact_r[1]);
  CHECK(g.exact_r[0] == g.exact_r[3]);
}

TEST_CASE("exact gram equals N*R recomputed via integer dot products") {
  const auto h = gen_binary_antipodal(6, 8, 77);
  const auto g = gram(h);
  const auto view = exact_view(h);
  REQUIRE(g.has_exact());
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      long dot = 0;
      for (int row = 0; row < 8; ++row) {
        dot += view.column(i)[static_cast<std::size_t>(row)] * view.column(j)[static_cast<std::size_t>(row)];
      }
      CHECK(g.exact_r[static_cast<std::size_t>(i) * 6 + j] == Rational(dot));
      CHECK(8.0 * g.at(i, j) == doctest::Approx(static_cast<double>(dot)).epsilon(1e-12));
    }
  }
}

TEST_CASE("quadratic form identity holds on 100 random real vectors") {
  const auto h = gen_binary_antipodal(7, 9, 4);
  const auto g = gram(h);
  rng::Stream stream(rng::mix64(55));
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(7);
    for (auto& v : x) v = stream.next_gaussian();
    double quad = 0.0;
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) quad += x[static_cast<std::size_t>(i)] * g.at(i, j) * x[static_cast<std::size_t>(j)];
    }
    double norm = 0.0;
    for (int row = 0; row < 9; ++row) {
      double u = 0.0;
      for (int j = 0; j < 7; ++j) u += h.fvalue(row, j) * x[static_cast<std::size_t>(j)];
      norm += u * u;
    }
    CHECK(quad == doctest::Approx(norm).epsilon(1e-12));
    CHECK(quad >= -1e-12);
  }
}

TEST_CASE("alphabet rank over Q") {
  CHECK(alphabet_rank(binary_antipodal_alphabet()) == 1);
  CHECK(alphabet_rank(qpsk_alphabet()) == 2);
  // {+-1, +-2}: 2*(1) - (2) = 0, everything sits on one rational line.
  const auto quaternary = make_alphabet(
      {{Rational(1)}, {Rational(-1)}, {Rational(2)}, {Rational(-2)}},
      {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  CHECK(alphabet_rank(quaternary) == 1);
}

TEST_CASE("alphabet rank is invariant under common rational scaling") {
  auto scale = [](const Alphabet& a, const Rational& f) {
    auto symbols = a.symbols;
    for (auto& s : symbols) {
      for (auto& c : s) c *= f;
    }
    return make_alphabet(symbols, a.probabilities, a.basis, a.scale_rule);
  };
  for (const auto& base : {binary_antipodal_alphabet(), qpsk_alphabet()}) {
    CHECK(alphabet_rank(scale(base, Rational(3, 7))) == alphabet_rank(base));
  }
}

TEST_CASE("zeta and its inverse") {
  CHECK(zeta(81, 54) == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(chips_for_zeta(81, 0.375) == 54);
  CHECK(zeta(9, 9) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(zeta(1, 5), ValidationError);
  CHECK_THROWS_AS(chips_for_zeta(1, 0.5), ValidationError);
  CHECK_THROWS_AS(chips_for_zeta(9, 0.0), ValidationError);
}

TEST_CASE("matrix JSON round-trips bit-exactly") {
  for (const auto& h : {gen_binary_antipodal(5, 7, 13), gen_gaussian(4, 6, 13),
                        gen_finite_alphabet(3, 5, qpsk_alphabet(), 13)}) {
    const auto j = matrix_to_json(h);
    const auto back = matrix_from_json(json::parse(j.dump()));
    CHECK(back.entries_exact == h.entries_exact);
    CHECK(back.entries_float == h.entries_float);
    CHECK(back.n_chips == h.n_chips);
    CHECK(back.n_users == h.n_users);
    CHECK(back.seed == h.seed);
    CHECK(back.ensemble == h.ensemble);
  }
}

TEST_CASE("empirical symbol frequencies match the probabilities") {
  const auto alphabet = make_alphabet(
      {{Rational(1)}, {Rational(-1)}, {Rational(2)}, {Rational(-2)}},
      {Rational(1, 3), Rational(1, 3), Rational(1, 6), Rational(1, 6)});
  const auto h = gen_finite_alphabet(100, 1000, alphabet, 2718);
  std::map<int, long> counts;
  for (const auto s : h.entries_exact) ++counts[s];
  const double n = 100000.0;
  for (int s = 0; s < alphabet.size(); ++s) {
    const double p = to_double(alphabet.probabilities[static_cast<std::size_t>(s)]);
    const double dev = std::abs(static_cast<double>(counts[s]) - n * p);
    CHECK(dev <= 4.0 * std::sqrt(n * p * (1.0 - p)));
  }
}

TEST_CASE("complex gram and quadratic form match direct complex arithmetic") {
  const auto h = gen_finite_alphabet(5, 6, qpsk_alphabet(), 41);
  const auto g = gram(h);
  std::vector<std::complex<double>> hc(static_cast<std::size_t>(6) * 5);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 5; ++j) {
      hc[static_cast<std::size_t>(i) * 5 + j] = {h.fvalue(i, j, 0), h.fvalue(i, j, 1)};
    }
  }
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      std::complex<double> dot = 0.0;
      for (int i = 0; i < 6; ++i) {
        dot += std::conj(hc[static_cast<std::size_t>(i) * 5 + a]) * hc[static_cast<std::size_t>(i) * 5 + b];
      }
      CHECK(g.at(a, b) == doctest::Approx(dot.real()).epsilon(1e-12));
      // N * R in exact rationals
      CHECK(to_double(g.exact_r[static_cast<std::size_t>(a) * 5 + b]) ==
            doctest::Approx(6.0 * dot.real()).epsilon(1e-12));
    }
  }
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(gen_binary_antipodal(0, 4, 1), ValidationError);
  CHECK_THROWS_AS(gen_gaussian(4, 0, 1), ValidationError);
}

TEST_SUITE_END();
