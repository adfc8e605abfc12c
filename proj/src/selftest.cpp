// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <ostream>

#include "muefix/bounds.hpp"
#include "muefix/cli.hpp"
#include "muefix/detecting.hpp"
#include "muefix/efficiency.hpp"
#include "muefix/rng.hpp"
#include "muefix/stats.hpp"

namespace muefix::cli {

namespace {

struct Battery {
  std::ostream& out;
  bool all_ok = true;

  void check(const char* name, bool ok) {
    out << (ok ? "ok   " : "FAIL ") << name << "\n";
    all_ok = all_ok && ok;
  }
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

bool selftest(std::ostream& out) {
  Battery t{out};

  {
    const auto a = gen_binary_antipodal(5, 7, 3);
    const auto b = gen_binary_antipodal(5, 7, 3);
    t.check("generation deterministic",
            a.entries_exact == b.entries_exact && a.entries_float == b.entries_float);
    const auto g1 = gen_gaussian(4, 6, 11);
    const auto g2 = gen_gaussian(4, 6, 11);
    t.check("gaussian deterministic", g1.entries_float == g2.entries_float);

    bool pm_one = true;
    const auto view = exact_view(a);
    for (const auto c : view.coords) pm_one = pm_one && (c == 1 || c == -1);
    t.check("binary entries are +-1 before scaling", pm_one && view.denom == 1);
  }

  {
    const auto h = gen_binary_antipodal(6, 8, 21);
    const auto g = gram(h);
    rng::Stream stream(rng::mix64(99));
    bool ok = true;
    for (int rep = 0; rep < 20 && ok; ++rep) {
      std::vector<double> x(6);
      for (auto& v : x) v = stream.next_gaussian();
      double quad = 0.0;
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) quad += x[i] * g.at(i, j) * x[j];
      }
      double norm = 0.0;
      for (int row = 0; row < 8; ++row) {
        double u = 0.0;
        for (int j = 0; j < 6; ++j) u += h.fvalue(row, j) * x[j];
        norm += u * u;
      }
      ok = near(quad, norm, 1e-12 * std::max(1.0, std::abs(norm)));
    }
    t.check("gram quadratic form matches ||Hx||^2", ok);
  }

  {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 4 && ok; ++seed) {
      const auto h = gen_binary_antipodal(7, 9, seed);
      for (int w = 1; w <= 7 && ok; w += 2) {
        const auto v = min_over_weight(h, w);
        ok = v.exact && *v.exact >= 1;
      }
    }
    t.check("odd-weight forms stay >= 1 exactly", ok);
  }

  {
    bool ok = true;
    const auto p = bounds::p_zero_table(1000);
    for (std::int64_t j = 1; j < 1000 && ok; ++j) {
      ok = p[static_cast<std::size_t>(j + 1)] < p[static_cast<std::size_t>(j)] &&
           p[static_cast<std::size_t>(j)] <= bounds::p_zero_upper(j);
    }
    ok = ok && bounds::p_zero_exact(1) == Rational(1, 2);
    t.check("p(j) decreasing and under the Stirling bound", ok);
  }

  {
    const auto a = bounds::fig1_lower_bound(0.25);
    const auto b = bounds::fig1_lower_bound(0.4375);
    const auto c = bounds::fig1_lower_bound(0.6);
    const auto d = bounds::fig1_lower_bound(0.9);
    t.check("lower-bound curve pieces",
            a.eta_bound == 1.0 && b.eta_bound == 0.5 && c.tag == bounds::CurveTag::unknown &&
                d.tag == bounds::CurveTag::zero);
  }

  {
    bool ok = true;
    for (std::int64_t m = 1; m <= 20 && ok; ++m) {
      for (std::int64_t r = 0; r <= m && ok; ++r) {
        BigInt lhs, mm, rr, ss;
        mpz_bin_uiui(lhs.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(r));
        mpz_ui_pow_ui(mm.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(m));
        mpz_ui_pow_ui(rr.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(r));
        mpz_ui_pow_ui(ss.get_mpz_t(), static_cast<unsigned long>(m - r), static_cast<unsigned long>(m - r));
        ok = lhs * rr * ss <= mm;
      }
    }
    t.check("entropy bound on binomials (exact, m <= 20)", ok);
  }

  {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 10 && ok; ++seed) {
      const auto hb = gen_binary_antipodal(7, 9, seed);
      const auto rb = eta_bruteforce(hb);
      const auto bb = eta_branch_bound(hb);
      ok = rb.eta.exact && bb.eta.exact && *rb.eta.exact == *bb.eta.exact;
      const auto hg = gen_gaussian(6, 8, seed);
      const auto rg = eta_bruteforce(hg);
      const auto bg = eta_branch_bound(hg);
      ok = ok && near(rg.eta.value, bg.eta.value, 1e-9 * std::max(1.0, rg.eta.value));
    }
    t.check("branch-and-bound matches brute force", ok);
  }

  {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 20 && ok; ++seed) {
      const auto h = gen_binary_antipodal(8, seed < 10 ? 5 : 14, seed);
      const auto verdict = is_detecting(h);
      const auto eta = eta_branch_bound(h);
      ok = verdict.is_detecting == (*eta.eta.exact > 0);
      if (verdict.witness) ok = ok && verify_witness(h, *verdict.witness);
    }
    t.check("detecting verdict agrees with eta > 0", ok);
  }

  {
    t.check("chi-squared CDF exponential case",
            near(bounds::chi2_cdf(2, 2.0), 1.0 - std::exp(-1.0), 1e-12));
    const auto ci = stats::wilson95(0, 1000);
    t.check("rule of three at zero events", ci.low == 0.0 && near(ci.high, 0.003, 1e-12));
  }

  {
    const auto h = gen_binary_antipodal(4, 8, 11);
    rng::Stream stream(rng::mix64(5));
    bool ok = true;
    for (int rep = 0; rep < 50 && ok; ++rep) {
      std::vector<std::int8_t> b(4);
      for (auto& v : b) v = static_cast<std::int8_t>(stream.next_sign());
      std::vector<double> y(8, 0.0);
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 4; ++j) y[static_cast<std::size_t>(i)] += h.fvalue(i, j) * b[static_cast<std::size_t>(j)];
      }
      ok = ml_detect(h, y) == b;
    }
    t.check("noiseless ML detection recovers the data", ok);
  }

  out << (t.all_ok ? "selftest: all invariants hold\n" : "selftest: FAILURES above\n");
  return t.all_ok;
}

}  // namespace muefix::cli
