// SPDX-License-Identifier: Apache-2.0
#include "muefix/matrix.hpp"

#include <cmath>
#include <string>

#include "muefix/common.hpp"
#include "muefix/rng.hpp"

namespace muefix {

const char* ensemble_name(Ensemble e) {
  switch (e) {
    case Ensemble::binary_antipodal: return "binary_antipodal";
    case Ensemble::gaussian: return "gaussian";
    case Ensemble::finite_alphabet: return "finite_alphabet";
  }
  return "?";
}

Ensemble ensemble_from_name(const std::string& name) {
  if (name == "binary_antipodal" || name == "binary") return Ensemble::binary_antipodal;
  if (name == "gaussian") return Ensemble::gaussian;
  if (name == "finite_alphabet" || name == "finite") return Ensemble::finite_alphabet;
  throw ValidationError("unknown ensemble: '" + name + "'");
}

namespace {

void check_shape(int k, int n) {
  if (k < 1) throw ValidationError("user count must be >= 1");
  if (n < 1) throw ValidationError("chip count must be >= 1");
}

double scale_factor(const Alphabet& a, int n) {
  return a.scale_rule == ScaleRule::inv_sqrt_n ? 1.0 / std::sqrt(static_cast<double>(n))
                                               : 1.0 / std::sqrt(2.0 * static_cast<double>(n));
}

// Entry draws are pure functions of (seed, row, column): entry (i, j) reads
// the per-matrix stream at counter i*K + j (two counters for Gaussian), so
// neither generation order nor thread count can change a matrix.
SpreadingMatrix gen_exact(int k, int n, const Alphabet& alphabet, std::uint64_t seed, Ensemble tag) {
  check_shape(k, n);
  alphabet.validate();
  SpreadingMatrix h;
  h.n_chips = n;
  h.n_users = k;
  h.ensemble = tag;
  h.seed = seed;
  h.alphabet = alphabet;

  const auto thresholds = sampling_thresholds(alphabet);
  const auto coords = exact_symbol_coords(alphabet);
  const double scale = scale_factor(alphabet, n);
  const int planes = alphabet.real_basis() ? 1 : 2;
  const int d = alphabet.dim();

  h.entries_exact.resize(static_cast<std::size_t>(n) * k);
  h.entries_float.resize(static_cast<std::size_t>(n) * k * planes);
  const std::uint64_t key = rng::mix64(seed);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      const std::uint64_t idx = static_cast<std::uint64_t>(i) * k + j;
      const unsigned __int128 u = rng::at(key, idx);
      int sym = 0;
      while (u >= thresholds[static_cast<std::size_t>(sym)]) ++sym;
      h.entries_exact[idx] = sym;
      double re = 0.0, im = 0.0;
      for (int t = 0; t < d; ++t) {
        const double c = static_cast<double>(coords.symbol(sym)[t]) / static_cast<double>(coords.denom);
        re += c * alphabet.basis[static_cast<std::size_t>(t)].real();
        im += c * alphabet.basis[static_cast<std::size_t>(t)].imag();
      }
      h.entries_float[idx * planes] = re * scale;
      if (planes == 2) h.entries_float[idx * planes + 1] = im * scale;
    }
  }
  return h;
}

}  // namespace

SpreadingMatrix gen_binary_antipodal(int k, int n, std::uint64_t seed) {
  return gen_exact(k, n, binary_antipodal_alphabet(), seed, Ensemble::binary_antipodal);
}

SpreadingMatrix gen_finite_alphabet(int k, int n, const Alphabet& alphabet, std::uint64_t seed) {
  return gen_exact(k, n, alphabet, seed, Ensemble::finite_alphabet);
}

SpreadingMatrix gen_gaussian(int k, int n, std::uint64_t seed) {
  check_shape(k, n);
  SpreadingMatrix h;
  h.n_chips = n;
  h.n_users = k;
  h.ensemble = Ensemble::gaussian;
  h.seed = seed;
  h.entries_float.resize(static_cast<std::size_t>(n) * k);
  const std::uint64_t key = rng::mix64(seed);
  const double sd = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      const std::uint64_t idx = static_cast<std::uint64_t>(i) * k + j;
      h.entries_float[idx] = sd * rng::gaussian_from_bits(rng::at(key, 2 * idx), rng::at(key, 2 * idx + 1));
    }
  }
  return h;
}

GramMatrix gram(const SpreadingMatrix& h) {
  const int k = h.n_users;
  const int n = h.n_chips;
  const int planes = h.planes();
  GramMatrix g;
  g.k = k;
  g.r.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      double dot = 0.0;
      for (int row = 0; row < n; ++row) {
        for (int p = 0; p < planes; ++p) dot += h.fvalue(row, i, p) * h.fvalue(row, j, p);
      }
      g.r[static_cast<std::size_t>(i) * k + j] = dot;
      g.r[static_cast<std::size_t>(j) * k + i] = dot;
    }
  }

  if (h.has_exact()) {
    const ExactMatrixView view = exact_view(h);
    if (view.norm_supported) {
      // N * R = G_int / (denom^2 * s), s = 2 for the 1/sqrt(2N) rule.
      const std::int64_t s = h.alphabet->scale_rule == ScaleRule::inv_sqrt_2n ? 2 : 1;
      Rational den(view.denom);
      den *= view.denom;
      den *= s;
      g.exact_r.resize(static_cast<std::size_t>(k) * k);
      for (int i = 0; i < k; ++i) {
        const auto ci = view.column(i);
        for (int j = i; j < k; ++j) {
          const auto cj = view.column(j);
          __int128 dot = 0;
          for (std::size_t t = 0; t < ci.size(); ++t) {
            dot += static_cast<__int128>(ci[t]) * cj[t];
          }
          Rational value(int128_to_bigint(dot));
          value /= den;
          value.canonicalize();
          g.exact_r[static_cast<std::size_t>(i) * k + j] = value;
          g.exact_r[static_cast<std::size_t>(j) * k + i] = value;
        }
      }
    }
  }
  return g;
}

double zeta(int k, int n) {
  if (k < 2) throw ValidationError("zeta requires k >= 2 (log3 k must be positive)");
  if (n < 1) throw ValidationError("zeta requires n >= 1");
  const double log3k = std::log(static_cast<double>(k)) / std::log(3.0);
  return static_cast<double>(k) / (static_cast<double>(n) * log3k);
}

int chips_for_zeta(int k, double zeta_target) {
  if (k < 2) throw ValidationError("chips_for_zeta requires k >= 2");
  if (!(zeta_target > 0.0)) throw ValidationError("chips_for_zeta requires zeta > 0");
  const double log3k = std::log(static_cast<double>(k)) / std::log(3.0);
  // Tiny slack so an analytically integral quotient is not pushed up a step
  // by floating-point noise in log3.
  const double n = std::ceil(static_cast<double>(k) / (zeta_target * log3k) - 1e-9);
  return std::max(1, static_cast<int>(n));
}

ExactMatrixView exact_view(const SpreadingMatrix& h) {
  if (!h.has_exact()) throw ValidationError("matrix has no exact representation");
  const Alphabet& a = *h.alphabet;
  const auto sym = exact_symbol_coords(a);
  ExactMatrixView view;
  view.n = h.n_chips;
  view.k = h.n_users;
  view.dim = sym.dim;
  view.denom = sym.denom;
  view.norm_supported = (sym.dim == 1 && a.real_basis() && a.basis[0] == std::complex<double>(1.0, 0.0)) ||
                        a.complex_basis();
  view.coords.resize(static_cast<std::size_t>(view.n) * view.k * view.dim);
  for (int i = 0; i < view.n; ++i) {
    for (int j = 0; j < view.k; ++j) {
      const int s = h.entries_exact[static_cast<std::size_t>(i) * view.k + j];
      const std::int64_t* c = sym.symbol(s);
      for (int t = 0; t < view.dim; ++t) {
        view.coords[(static_cast<std::size_t>(j) * view.n + i) * view.dim + t] = c[t];
      }
    }
  }
  const std::int64_t s = a.scale_rule == ScaleRule::inv_sqrt_2n ? 2 : 1;
  view.norm_denom = Rational(view.denom);
  view.norm_denom *= view.denom;
  view.norm_denom *= s;
  view.norm_denom *= view.n;
  view.norm_denom.canonicalize();
  return view;
}

}  // namespace muefix
