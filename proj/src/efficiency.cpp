// SPDX-License-Identifier: Apache-2.0
#include "muefix/efficiency.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "muefix/common.hpp"

namespace muefix {

const char* method_name(Method m) {
  return m == Method::brute_force ? "brute_force" : "branch_bound";
}

namespace {

// Column-major copy of the float entries (planes interleaved per row).
std::vector<double> float_columns(const SpreadingMatrix& h) {
  const int planes = h.planes();
  std::vector<double> cols(static_cast<std::size_t>(h.n_users) * h.n_chips * planes);
  for (int j = 0; j < h.n_users; ++j) {
    for (int i = 0; i < h.n_chips; ++i) {
      for (int p = 0; p < planes; ++p) {
        cols[(static_cast<std::size_t>(j) * h.n_chips + i) * planes + p] = h.fvalue(i, j, p);
      }
    }
  }
  return cols;
}

struct FloatKernel {
  int n, planes;
  std::vector<double> cols;  // per column: n*planes values
  std::vector<double> u;

  explicit FloatKernel(const SpreadingMatrix& h)
      : n(h.n_chips), planes(h.planes()), cols(float_columns(h)),
        u(static_cast<std::size_t>(h.n_chips) * h.planes(), 0.0) {}

  void reset() { std::fill(u.begin(), u.end(), 0.0); }
  void apply(int col, int delta) {
    const double* c = cols.data() + static_cast<std::size_t>(col) * u.size();
    const double f = static_cast<double>(delta);
    for (std::size_t t = 0; t < u.size(); ++t) u[t] += f * c[t];
  }
  double norm2() const {
    double s = 0.0;
    for (const double v : u) s += v * v;
    return s;
  }
};

struct ExactKernel {
  ExactMatrixView view;
  std::vector<std::int64_t> u;

  explicit ExactKernel(const SpreadingMatrix& h)
      : view(exact_view(h)), u(static_cast<std::size_t>(view.n) * view.dim, 0) {}

  void reset() { std::fill(u.begin(), u.end(), 0); }
  void apply(int col, int delta) {
    const auto c = view.column(col);
    for (std::size_t t = 0; t < u.size(); ++t) u[t] += delta * c[t];
  }
  __int128 norm2() const {
    __int128 s = 0;
    for (const std::int64_t v : u) s += static_cast<__int128>(v) * v;
    return s;
  }
};

Rational exact_eta_from_norm(const ExactMatrixView& view, __int128 norm) {
  Rational value(int128_to_bigint(norm));
  value /= view.norm_denom;
  value.canonicalize();
  return value;
}

bool exact_norm_available(const SpreadingMatrix& h) {
  if (!h.has_exact()) return false;
  return exact_view(h).norm_supported;
}

void check_vector(const SpreadingMatrix& h, const TernaryVector& x) {
  if (x.size() != h.n_users) throw ValidationError("error vector length differs from user count");
  if (x.is_zero()) throw ValidationError("error vector must be nonzero");
}

// Shared canonical-enumeration minimizer. weight_ok filters by weight; the
// lexicographically smallest canonical argmin wins ties.
template <typename Kernel, typename Value>
struct BruteOutcome {
  Value best;
  TernaryVector argmin;
  std::uint64_t examined = 0;
  bool found = false;
};

template <typename Kernel, typename Value, typename WeightOk>
BruteOutcome<Kernel, Value> brute_minimize(Kernel& kernel, int k, WeightOk&& weight_ok) {
  BruteOutcome<Kernel, Value> out;
  enumerate_canonical(
      k, [&](int col, int delta) { kernel.apply(col, delta); },
      [&](const std::vector<std::int8_t>& x, int weight) {
        if (!weight_ok(weight)) return;
        ++out.examined;
        const Value v = kernel.norm2();
        if (!out.found || v < out.best) {
          out.best = v;
          out.argmin.entries = x;
          out.argmin.weight = weight;
          out.found = true;
        } else if (v == out.best) {
          TernaryVector cand;
          cand.entries = x;
          cand.weight = weight;
          if (lex_less(cand, out.argmin)) out.argmin = std::move(cand);
        }
      });
  return out;
}

template <typename WeightOk>
EfficiencyResult brute_force_core(const SpreadingMatrix& h, WeightOk&& weight_ok) {
  EfficiencyResult result;
  result.method = Method::brute_force;
  if (exact_norm_available(h)) {
    ExactKernel kernel(h);
    auto out = brute_minimize<ExactKernel, __int128>(kernel, h.n_users, weight_ok);
    if (!out.found) throw ValidationError("empty search family");
    result.eta.exact = exact_eta_from_norm(kernel.view, out.best);
    result.eta.value = to_double(*result.eta.exact);
    result.argmin = std::move(out.argmin);
    result.vectors_examined = out.examined;
  } else {
    FloatKernel kernel(h);
    auto out = brute_minimize<FloatKernel, double>(kernel, h.n_users, weight_ok);
    if (!out.found) throw ValidationError("empty search family");
    result.argmin = std::move(out.argmin);
    result.vectors_examined = out.examined;
    result.eta = eta_for_error_vector(h, result.argmin);
  }
  return result;
}

void check_bruteforce_cap(int k, const SearchOptions& opts) {
  if (k > opts.bruteforce_user_cap) {
    throw CapacityError("brute force refused: K = " + std::to_string(k) + " exceeds cap " +
                        std::to_string(opts.bruteforce_user_cap) +
                        " (3^K states); raise the cap explicitly to override");
  }
}

// Branch-and-bound over the LDL^T form: cost(x) = sum_k d_k (x_k + s_k)^2
// with s_k = sum_{j>k} L[j][k] x_j, assigned from the last coordinate down.
struct BranchBound {
  const SpreadingMatrix& h;
  int k;
  std::vector<double> L;  // unit lower triangular, row-major
  std::vector<double> d;
  std::vector<double> s;
  std::vector<std::int8_t> x;
  int assigned_nonzero = 0;

  bool exact;
  std::optional<ExactKernel> leaf_kernel;
  Rational best_exact;
  double best_float = std::numeric_limits<double>::infinity();
  double limit = std::numeric_limits<double>::infinity();
  bool found = false;
  TernaryVector argmin;
  std::uint64_t examined = 0, pruned = 0;

  explicit BranchBound(const SpreadingMatrix& hh) : h(hh), k(hh.n_users) {
    exact = exact_norm_available(hh);
    if (exact) leaf_kernel.emplace(hh);
    s.assign(static_cast<std::size_t>(k), 0.0);
    x.assign(static_cast<std::size_t>(k), 0);
  }

  // False if the factorization is unusable (rank-deficient or tiny pivot).
  bool factorize(const GramMatrix& g, double pivot_tol) {
    L.assign(static_cast<std::size_t>(k) * k, 0.0);
    d.assign(static_cast<std::size_t>(k), 0.0);
    for (int j = 0; j < k; ++j) {
      double dj = g.at(j, j);
      for (int m = 0; m < j; ++m) dj -= L[static_cast<std::size_t>(j) * k + m] * L[static_cast<std::size_t>(j) * k + m] * d[static_cast<std::size_t>(m)];
      if (!(dj > pivot_tol)) return false;
      d[static_cast<std::size_t>(j)] = dj;
      L[static_cast<std::size_t>(j) * k + j] = 1.0;
      for (int i = j + 1; i < k; ++i) {
        double v = g.at(i, j);
        for (int m = 0; m < j; ++m) v -= L[static_cast<std::size_t>(i) * k + m] * L[static_cast<std::size_t>(j) * k + m] * d[static_cast<std::size_t>(m)];
        L[static_cast<std::size_t>(i) * k + j] = v / dj;
      }
    }
    return true;
  }

  void seed_incumbent() {
    // Weight-1 vectors are always candidates; they give a finite start.
    for (int j = k - 1; j >= 0; --j) {
      std::vector<std::int8_t> e(static_cast<std::size_t>(k), 0);
      e[static_cast<std::size_t>(j)] = 1;
      TernaryVector unit = TernaryVector::from(std::move(e));
      const EtaValue v = eta_for_error_vector(h, unit);
      accept_candidate(v, unit);
    }
  }

  void accept_candidate(const EtaValue& v, const TernaryVector& cand) {
    bool better;
    if (exact) {
      better = !found || *v.exact < best_exact;
      if (better) best_exact = *v.exact;
    } else {
      better = !found || v.value < best_float;
    }
    if (better) {
      best_float = v.value;
      argmin = cand;
      found = true;
      limit = best_float * (1.0 + 1e-9) + 1e-12;
    }
  }

  void evaluate_leaf() {
    ++examined;
    TernaryVector cand;
    cand.entries = x;
    for (const auto e : x) cand.weight += (e != 0);
    if (exact) {
      leaf_kernel->reset();
      for (int j = 0; j < k; ++j) {
        if (x[static_cast<std::size_t>(j)] != 0) leaf_kernel->apply(j, x[static_cast<std::size_t>(j)]);
      }
      const __int128 norm = leaf_kernel->norm2();
      EtaValue v;
      v.exact = exact_eta_from_norm(leaf_kernel->view, norm);
      v.value = to_double(*v.exact);
      accept_candidate(v, cand);
    } else {
      accept_candidate(eta_for_error_vector(h, cand), cand);
    }
  }

  void search(int level, double partial) {
    if (level < 0) {
      if (assigned_nonzero > 0) evaluate_leaf();
      return;
    }
    const double base = s[static_cast<std::size_t>(level)];
    const double dk = d[static_cast<std::size_t>(level)];
    std::array<int, 3> values{0, 1, -1};
    std::array<double, 3> costs{};
    int count = assigned_nonzero == 0 ? 2 : 3;  // sign symmetry: first nonzero is +1
    for (int i = 0; i < count; ++i) {
      const double z = base + values[static_cast<std::size_t>(i)];
      costs[static_cast<std::size_t>(i)] = dk * z * z;
    }
    // Schnorr-Euchner order: cheapest child first.
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.begin() + count,
              [&](int a, int b) { return costs[static_cast<std::size_t>(a)] < costs[static_cast<std::size_t>(b)]; });
    for (int oi = 0; oi < count; ++oi) {
      const int idx = order[static_cast<std::size_t>(oi)];
      const double child = partial + costs[static_cast<std::size_t>(idx)];
      if (child >= limit) {
        pruned += static_cast<std::uint64_t>(count - oi);
        break;  // children are cost-sorted
      }
      const int v = values[static_cast<std::size_t>(idx)];
      x[static_cast<std::size_t>(level)] = static_cast<std::int8_t>(v);
      if (v != 0) {
        ++assigned_nonzero;
        for (int m = 0; m < level; ++m) s[static_cast<std::size_t>(m)] += L[static_cast<std::size_t>(level) * k + m] * v;
      }
      search(level - 1, child);
      if (v != 0) {
        --assigned_nonzero;
        for (int m = 0; m < level; ++m) s[static_cast<std::size_t>(m)] -= L[static_cast<std::size_t>(level) * k + m] * v;
      }
      x[static_cast<std::size_t>(level)] = 0;
    }
  }
};

}  // namespace

EtaValue eta_for_error_vector(const SpreadingMatrix& h, const TernaryVector& x) {
  check_vector(h, x);
  EtaValue out;
  FloatKernel kernel(h);
  for (int j = 0; j < h.n_users; ++j) {
    if (x.entries[static_cast<std::size_t>(j)] != 0) kernel.apply(j, x.entries[static_cast<std::size_t>(j)]);
  }
  out.value = kernel.norm2();
  if (exact_norm_available(h)) {
    ExactKernel exact(h);
    for (int j = 0; j < h.n_users; ++j) {
      if (x.entries[static_cast<std::size_t>(j)] != 0) exact.apply(j, x.entries[static_cast<std::size_t>(j)]);
    }
    out.exact = exact_eta_from_norm(exact.view, exact.norm2());
  }
  return out;
}

EfficiencyResult eta_bruteforce(const SpreadingMatrix& h, const SearchOptions& opts) {
  check_bruteforce_cap(h.n_users, opts);
  return brute_force_core(h, [](int) { return true; });
}

EfficiencyResult eta_branch_bound(const SpreadingMatrix& h, const SearchOptions& opts) {
  // Pruning against an LDL^T partial cost is only sound for a positive
  // definite factorization; otherwise run the exact enumeration.
  if (h.n_users > h.n_chips) return brute_force_core(h, [](int) { return true; });
  BranchBound bb(h);
  const GramMatrix g = gram(h);
  if (!bb.factorize(g, opts.pivot_tol)) return brute_force_core(h, [](int) { return true; });

  bb.seed_incumbent();
  bb.search(h.n_users - 1, 0.0);

  EfficiencyResult result;
  result.method = Method::branch_bound;
  result.argmin = bb.argmin.canonical();
  result.vectors_examined = bb.examined;
  result.nodes_pruned = bb.pruned;
  if (bb.exact) {
    result.eta.exact = bb.best_exact;
    result.eta.value = to_double(bb.best_exact);
  } else {
    result.eta = eta_for_error_vector(h, result.argmin);
  }
  return result;
}

namespace {

template <typename Kernel, typename Value>
std::optional<Value> min_over_weight_kernel(Kernel& kernel, int k, int w) {
  // Supports in lexicographic order; per support, a binary Gray walk over
  // the sign patterns with the first support coordinate pinned to +1.
  std::vector<int> support(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i) support[static_cast<std::size_t>(i)] = i;
  std::optional<Value> best;
  const std::uint64_t sign_states = w > 1 ? (std::uint64_t{1} << (w - 1)) : 1;
  std::vector<int> sign(static_cast<std::size_t>(w), 1);
  for (;;) {
    kernel.reset();
    std::fill(sign.begin(), sign.end(), 1);
    for (int i = 0; i < w; ++i) kernel.apply(support[static_cast<std::size_t>(i)], 1);
    Value v = kernel.norm2();
    if (!best || v < *best) best = v;
    std::uint64_t gray = 0;
    for (std::uint64_t m = 1; m < sign_states; ++m) {
      const std::uint64_t next = m ^ (m >> 1);
      const std::uint64_t changed = gray ^ next;
      int bit = 0;
      while (!((changed >> bit) & 1ull)) ++bit;
      gray = next;
      const int pos = bit + 1;  // sign of support[0] stays +1
      const int col = support[static_cast<std::size_t>(pos)];
      kernel.apply(col, -2 * sign[static_cast<std::size_t>(pos)]);
      sign[static_cast<std::size_t>(pos)] = -sign[static_cast<std::size_t>(pos)];
      v = kernel.norm2();
      if (v < *best) best = v;
    }
    // next combination
    int i = w - 1;
    while (i >= 0 && support[static_cast<std::size_t>(i)] == k - w + i) --i;
    if (i < 0) break;
    ++support[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < w; ++j) support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace

EtaValue min_over_weight(const SpreadingMatrix& h, int w) {
  if (w < 1 || w > h.n_users) throw ValidationError("weight out of range [1, K]");
  EtaValue out;
  if (exact_norm_available(h)) {
    ExactKernel kernel(h);
    const auto best = min_over_weight_kernel<ExactKernel, __int128>(kernel, h.n_users, w);
    out.exact = exact_eta_from_norm(kernel.view, *best);
    out.value = to_double(*out.exact);
  } else {
    FloatKernel kernel(h);
    out.value = *min_over_weight_kernel<FloatKernel, double>(kernel, h.n_users, w);
  }
  return out;
}

EtaValue min_even_weight(const SpreadingMatrix& h) {
  EtaValue out;
  if (h.n_users < 2) {
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  if (exact_norm_available(h)) {
    ExactKernel kernel(h);
    auto res = brute_minimize<ExactKernel, __int128>(kernel, h.n_users,
                                                     [](int w) { return w >= 2 && w % 2 == 0; });
    out.exact = exact_eta_from_norm(kernel.view, res.best);
    out.value = to_double(*out.exact);
  } else {
    FloatKernel kernel(h);
    auto res = brute_minimize<FloatKernel, double>(kernel, h.n_users,
                                                   [](int w) { return w >= 2 && w % 2 == 0; });
    out.value = res.best;
  }
  return out;
}

std::vector<std::int8_t> ml_detect(const SpreadingMatrix& h, std::span<const double> y,
                                   const SearchOptions& opts) {
  if (h.is_complex()) throw ValidationError("ml_detect expects a real-valued matrix");
  if (static_cast<int>(y.size()) != h.n_chips) throw ValidationError("observation length differs from chip count");
  if (h.n_users > opts.bruteforce_user_cap) {
    throw CapacityError("ml_detect refused: K exceeds the brute-force cap");
  }
  const int k = h.n_users;
  const int n = h.n_chips;
  FloatKernel kernel(h);

  // u = Hb - y, walked over {+-1}^K by a binary Gray sequence.
  std::vector<std::int8_t> b(static_cast<std::size_t>(k), 1);
  for (int j = 0; j < k; ++j) kernel.apply(j, 1);
  for (int i = 0; i < n; ++i) kernel.u[static_cast<std::size_t>(i)] -= y[static_cast<std::size_t>(i)];

  // Tie-break: prefer +1 at the first differing user.
  auto tie_better = [](const std::vector<std::int8_t>& cand, const std::vector<std::int8_t>& best) {
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (cand[i] != best[i]) return cand[i] > best[i];
    }
    return false;
  };

  std::vector<std::int8_t> best_b = b;
  double best_d = kernel.norm2();
  std::uint64_t gray = 0;
  const std::uint64_t states = std::uint64_t{1} << k;
  for (std::uint64_t m = 1; m < states; ++m) {
    const std::uint64_t next = m ^ (m >> 1);
    const std::uint64_t changed = gray ^ next;
    int bit = 0;
    while (!((changed >> bit) & 1ull)) ++bit;
    gray = next;
    kernel.apply(bit, -2 * b[static_cast<std::size_t>(bit)]);
    b[static_cast<std::size_t>(bit)] = static_cast<std::int8_t>(-b[static_cast<std::size_t>(bit)]);
    const double dist = kernel.norm2();
    if (dist < best_d || (dist == best_d && tie_better(b, best_b))) {
      best_d = dist;
      best_b = b;
    }
  }
  return best_b;
}

}  // namespace muefix
