#include "lfactor/kernel_hankel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace lfactor {

namespace {

constexpr i64 kMaxLemmaCount = 5'000'000;

double ppow(int p, double k) { return std::pow(static_cast<double>(p), k); }

// Average of psi(p^m u z) over z in p^ell Z_p.
Scalar avg_psi(int p, int m, int ell, i64 u) {
  const int r = std::max(0, -m - ell);
  if (r == 0) return 1.0;
  const i64 den = ipow(p, r);
  Scalar s = 0.0;
  for (i64 j = 0; j < den; ++j) s += unit_root(mul_mod(mod_floor(u, den), j, den), den);
  return s / static_cast<double>(den);
}

}  // namespace

Scalar kernel_eval(const Gl1Kernel& k, const PAdicElt& x) {
  if (x.p != k.pi.p()) throw FunctionError("kernel_eval: mismatched primes");
  if (x.prec < std::max(k.pi.cond(), -x.val)) throw FunctionError("kernel_eval: insufficient precision");
  return psi_value(x) * char_eval(char_inverse(k.pi), x) * ppow(x.p, -0.5 * x.val);
}

Scalar truncation_factor(int p, int m, int ell) { return avg_psi(p, m, ell, 1); }

Scalar kernel_eval(const TruncatedKernel& k, const PAdicElt& x) {
  if (k.ell < 1) throw FunctionError("truncated kernel: ell must be >= 1");
  return kernel_eval(k.base, x) * avg_psi(x.p, x.val, k.ell, x.unit);
}

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

StabilityReport truncation_stability(const Gl1Kernel& k, int m, const std::vector<int>& ells, const MultChar& twist) {
  const int p = k.pi.p();
  if (twist.p() != p) throw FunctionError("truncation_stability: mismatched primes");
  for (const int ell : ells)
    if (ell < 1) throw FunctionError("truncation_stability: ell must be >= 1");
  const int n = std::max({k.pi.cond(), twist.cond(), -m, 1});
  const i64 mod = ipow(p, n);
  const MultChar twist_inv = char_inverse(twist);
  std::vector<i64> units;
  std::vector<Scalar> full, weight;
  for (i64 u = 1; u < mod; ++u) {
    if (u % p == 0) continue;
    const PAdicElt x(p, m, u, n);
    units.push_back(u);
    full.push_back(kernel_eval(k, x));
    weight.push_back(char_eval(twist_inv, x) / static_cast<double>(mod));
  }
  StabilityReport rep;
  rep.m = m;
  rep.full_coeff = 0.0;
  for (std::size_t i = 0; i < units.size(); ++i) rep.full_coeff += full[i] * weight[i];
  std::vector<int> sorted = ells;
  std::sort(sorted.begin(), sorted.end());
  for (const int ell : sorted) {
    StabilityEntry e{ell, 0.0, true};
    for (std::size_t i = 0; i < units.size(); ++i) {
      const Scalar v = kernel_eval(TruncatedKernel{k, ell}, PAdicElt(p, m, units[i], n));
      e.coeff += v * weight[i];
      if (std::abs(v - full[i]) > 1e-12 * std::max(1.0, std::abs(full[i]))) e.matches_full = false;
    }
    rep.entries.push_back(e);
  }
  for (std::size_t i = rep.entries.size(); i-- > 0;) {
    if (!rep.entries[i].matches_full) break;
    rep.threshold = rep.entries[i].ell;
  }
  return rep;
}

std::optional<int> uniform_stability_threshold(const Gl1Kernel& k, int m_lo, int m_hi, const std::vector<int>& ells,
                                               const MultChar& twist) {
  int worst = 0;
  for (int m = m_lo; m <= m_hi; ++m) {
    const auto rep = truncation_stability(k, m, ells, twist);
    if (!rep.threshold) return std::nullopt;
    worst = std::max(worst, *rep.threshold);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Trace averages over K^1_{l0} / K^1_L
// ---------------------------------------------------------------------------

namespace {

i64 det_mod(const std::vector<std::vector<i64>>& h, int n, i64 mod) {
  auto mm = [mod](i64 a, i64 b) { return mul_mod(a, b, mod); };
  if (n == 2) return mod_floor(mm(h[0][0], h[1][1]) - mm(h[0][1], h[1][0]), mod);
  const i64 a = mm(h[0][0], mod_floor(mm(h[1][1], h[2][2]) - mm(h[1][2], h[2][1]), mod));
  const i64 b = mm(h[0][1], mod_floor(mm(h[1][0], h[2][2]) - mm(h[1][2], h[2][0]), mod));
  const i64 c = mm(h[0][2], mod_floor(mm(h[1][0], h[2][1]) - mm(h[1][1], h[2][0]), mod));
  return mod_floor(a - b + c, mod);
}

PRational det_exact(const QMatrix& g) {
  if (g.size() == 2) return g[0][0] * g[1][1] - g[0][1] * g[1][0];
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

}  // namespace

LemmaReport trace_average_check(int p, const QMatrix& g, int l0, int L) {
  const int n = static_cast<int>(g.size());
  if (p != 2 && p != 3) throw FunctionError("trace_average_check: p must be 2 or 3");
  if (n != 2 && n != 3) throw FunctionError("trace_average_check: matrix size must be 2 or 3");
  for (const auto& row : g)
    if (static_cast<int>(row.size()) != n) throw FunctionError("trace_average_check: matrix is not square");
  if (l0 < 1 || L <= l0 || L > 4) throw FunctionError("trace_average_check: need 1 <= l0 < L <= 4");
  int d = 0;
  for (const auto& row : g)
    for (const auto& x : row) {
      if (x.p() != p) throw FunctionError("trace_average_check: mismatched primes");
      if (!x.is_zero()) d = std::max(d, -x.val());
    }
  if (det_exact(g).is_zero()) throw FunctionError("trace_average_check: matrix not invertible");
  if (L < d) throw FunctionError("trace_average_check: precision guard violated (L below denominator exponent)");
  const int free_entries = n * n - 1;
  const i64 base = ipow(p, L - l0);
  i64 count = 1;
  for (int i = 0; i < free_entries; ++i) {
    count *= base;
    if (count > kMaxLemmaCount) throw FunctionError("trace_average_check: enumeration too large");
  }
  const i64 modL = ipow(p, L);
  const i64 modD = ipow(p, d);
  const i64 pl0 = ipow(p, l0);
  // p^d g reduced mod p^d
  std::vector<std::vector<i64>> G(n, std::vector<i64>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const PRational s = (g[i][j] * PRational(p, 1, d)).reduce_mod(d);
      G[i][j] = s.is_zero() ? 0 : s.num() * ipow(p, s.exp());
    }
  std::vector<i64> hist(static_cast<std::size_t>(modD), 0);
  std::vector<i64> a(free_entries, 0);
  std::vector<std::vector<i64>> h(n, std::vector<i64>(n, 0));
  for (i64 it = 0; it < count; ++it) {
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == n - 1 && j == n - 1) continue;
        h[i][j] = mod_floor((i == j ? 1 : 0) + pl0 * a[k++], modL);
      }
    // det(h) = h_nn C + R; solve det(h) = 1 mod p^L for h_nn.
    h[n - 1][n - 1] = 0;
    const i64 r = det_mod(h, n, modL);
    std::vector<std::vector<i64>> minor(n - 1, std::vector<i64>(n - 1));
    for (int i = 0; i < n - 1; ++i)
      for (int j = 0; j < n - 1; ++j) minor[i][j] = h[i][j];
    const i64 c = n == 2 ? minor[0][0] : det_mod(minor, 2, modL);
    h[n - 1][n - 1] = mul_mod(mod_floor(1 - r, modL), inv_mod(c, modL), modL);
    if (mod_floor(h[n - 1][n - 1] - 1, pl0) != 0) throw FunctionError("trace_average_check: internal lifting error");
    i64 tr = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) tr = mod_floor(tr + mul_mod(G[i][j], h[j][i] % modD, modD), modD);
    ++hist[tr];
    for (int i = free_entries - 1; i >= 0; --i) {
      if (++a[i] < base) break;
      a[i] = 0;
    }
  }
  Scalar acc = 0.0;
  for (i64 s = 0; s < modD; ++s)
    if (hist[s]) acc += static_cast<double>(hist[s]) * unit_root(s, modD);
  return {acc / static_cast<double>(count), count, d};
}

namespace {

QMatrix to_q(int p, const std::vector<std::vector<i64>>& m) {
  QMatrix out;
  for (const auto& row : m) {
    std::vector<PRational> r;
    for (const i64 v : row) r.emplace_back(p, v, 0);
    out.push_back(r);
  }
  return out;
}

// diag(t) * k with t_i = p^{e_i} u_i
QMatrix scale_rows(int p, const std::vector<std::vector<i64>>& k, const std::vector<int>& e, const std::vector<i64>& u) {
  QMatrix out = to_q(p, k);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto& x : out[i]) x = x * PRational(p, u[i], e[i]);
  return out;
}

i64 rand_unit(std::mt19937_64& rng, int p, i64 mod) {
  std::uniform_int_distribution<i64> dist(1, mod - 1);
  while (true) {
    const i64 v = dist(rng);
    if (v % p != 0) return v;
  }
}

}  // namespace

std::vector<LemmaCase> lemma31_grid(int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(p) << 32));
  std::vector<LemmaCase> out;
  out.push_back({"control g=I2", to_q(p, {{1, 0}, {0, 1}}), 1, 2, 1.0});
  const i64 mod = ipow(p, 4);
  std::uniform_int_distribution<i64> any(0, mod - 1);
  std::uniform_int_distribution<int> small_val(0, 1);
  for (int l0 : {1, 2}) {
    for (int extra : {1, 2}) {
      const int d = l0 + extra;
      if (d > 4) continue;
      const int L = std::max(d, l0 + 1);
      const std::vector<i64> u2 = {rand_unit(rng, p, mod), rand_unit(rng, p, mod)};
      // sigma(1) = 1: unit diagonal, p-divisible lower corner.
      {
        std::vector<std::vector<i64>> k = {{rand_unit(rng, p, mod), any(rng)}, {p * any(rng), rand_unit(rng, p, mod)}};
        out.push_back({"sigma(1)=1", scale_rows(p, k, {-d, small_val(rng)}, u2), l0, L, 0.0});
      }
      // sigma(1) = n: units on the antidiagonal, p-divisible diagonal.
      {
        std::vector<std::vector<i64>> k = {{p * any(rng), rand_unit(rng, p, mod)}, {rand_unit(rng, p, mod), p * any(rng)}};
        out.push_back({"sigma(1)=n", scale_rows(p, k, {-d, small_val(rng) - l0 + 1}, u2), l0, L, 0.0});
      }
      // Random k in GL_2(Z_p).
      {
        std::vector<std::vector<i64>> k;
        do {
          k = {{any(rng), any(rng)}, {any(rng), any(rng)}};
        } while (mod_floor(k[0][0] * k[1][1] - k[0][1] * k[1][0], p) == 0);
        out.push_back({"random GL2(Z_p)", scale_rows(p, k, {-d, small_val(rng)}, u2), l0, L, 0.0});
      }
    }
    // sigma(1) = j0 = 2 needs n = 3; the two permutations with sigma(1) = 2.
    const int d = l0 + 1;
    const int L = std::max(d, l0 + 1);
    const std::vector<i64> u3 = {rand_unit(rng, p, mod), rand_unit(rng, p, mod), rand_unit(rng, p, mod)};
    for (int variant = 0; variant < 2; ++variant) {
      // k_{sigma(i), i} units, every other entry divisible by p.
      const std::vector<int> sigma = variant == 0 ? std::vector<int>{1, 2, 0} : std::vector<int>{1, 0, 2};
      std::vector<std::vector<i64>> k(3, std::vector<i64>(3, 0));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k[i][j] = p * any(rng);
      for (int i = 0; i < 3; ++i) k[sigma[i]][i] = rand_unit(rng, p, mod);
      out.push_back({"sigma(1)=j0", scale_rows(p, k, {-d, small_val(rng), small_val(rng) - l0 + 1}, u3), l0, L, 0.0});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gamma symbols and Hankel transforms
// ---------------------------------------------------------------------------

PiParams PiParams::satake(int p, const std::vector<Scalar>& alpha) {
  PiParams out;
  out.p = p;
  out.from_satake = true;
  for (const auto& a : alpha) {
    if (std::abs(a) == 0.0) throw FunctionError("PiParams: Satake parameters must be nonzero");
    out.chars.push_back(MultChar::unramified(p, a));
  }
  return out;
}

PiParams PiParams::gl1(const MultChar& chi) {
  PiParams out;
  out.p = chi.p();
  out.chars = {chi};
  return out;
}

PiParams PiParams::contragredient() const {
  PiParams out = *this;
  for (auto& c : out.chars) c = char_inverse(c);
  return out;
}

GammaSymbol gamma_symbol(const PiParams& params, int c_max) {
  GammaSymbol out{params, c_max, MellinData(params.p)};
  for (const auto& omega : unitary_components(params.p, c_max)) {
    RationalFunc g = RationalFunc::constant(params.p, 1.0);
    for (const auto& chi : params.chars) g = rf_mul(g, rf_shift_half(gamma_closed(char_product(chi, omega))));
    out.comps.set(omega, g);
  }
  return out;
}

MellinData hankel_mellin(const MultStepFunction& phi, const GammaSymbol& gsym) {
  if (phi.p() != gsym.params.p) throw FunctionError("hankel_mellin: mismatched primes");
  MellinData out(phi.p());
  const MellinData src = mellin(phi);
  for (const auto& [omega, m] : src.comps()) {
    if (omega.cond() > gsym.c_max) throw FunctionError("hankel_mellin: missing gamma component (c_max too small)");
    const RationalFunc g = gsym.comps.component(omega);
    out.set(char_inverse(omega), rf_subst_inverse(rf_mul(g, m)));
  }
  return out;
}

MultStepFunction hankel_convolve(const MultStepFunction& phi, const Gl1Kernel& k, int m_lo, int m_hi,
                                 std::optional<int> ell) {
  const int p = phi.p();
  if (k.pi.p() != p) throw FunctionError("hankel_convolve: mismatched primes");
  if (ell && *ell < 1) throw FunctionError("hankel_convolve: ell must be >= 1");
  const int level = phi.level();
  const i64 mod = ipow(p, level);
  const MultChar pi_inv = char_inverse(k.pi);
  const double rq = std::sqrt(static_cast<double>(p));
  // G(M, w) = int_{p^M w U_K} k d^x y
  std::map<std::pair<int, i64>, Scalar> cache;
  auto coset_integral = [&](int big_m, i64 w) -> Scalar {
    auto it = cache.find({big_m, w});
    if (it != cache.end()) return it->second;
    const int n = std::max({level, pi_inv.cond(), -big_m, 1});
    const i64 step = level == 0 ? 1 : mod;
    const i64 count = ipow(p, n) / step;
    const i64 den = big_m < 0 ? ipow(p, -big_m) : 1;
    const auto table = pi_inv.unit_table(pi_inv.cond());
    const i64 cmod = ipow(p, pi_inv.cond());
    Scalar s = 0.0;
    for (i64 j = 0; j < count; ++j) {
      const i64 v = (level == 0 ? 0 : w) + step * j;
      if (v % p == 0) continue;
      const Scalar ps = big_m < 0 ? unit_root(v % den, den) : Scalar(1.0);
      s += ps * table[v % cmod];
    }
    Scalar val = s * ppow(p, -n) * std::pow(pi_inv.t(), big_m) * std::pow(rq, -big_m);
    if (ell) val *= truncation_factor(p, big_m, *ell);
    cache.emplace(std::make_pair(big_m, w), val);
    return val;
  };
  MultStepFunction out(p, level);
  for (int m = m_lo; m <= m_hi; ++m) {
    for (i64 r = 0; r < mod; ++r) {
      if (level > 0 && r % p == 0) continue;
      Scalar v = 0.0;
      for (const auto& [key, val] : phi.values()) {
        const i64 w = level == 0 ? 0 : mul_mod(r, key.second, mod);
        v += val * coset_integral(m + key.first, w);
      }
      out.add_value(m, r, v);
    }
  }
  return out;
}

MultStepFunction hankel_via_mellin(const MultStepFunction& phi, const GammaSymbol& gsym, int m_lo, int m_hi) {
  return mellin_invert(hankel_mellin(phi, gsym), m_lo, m_hi, std::max(phi.level(), gsym.c_max));
}

HankelComparison hankel_both(const MultStepFunction& phi, const MultChar& pi, int m_lo, int m_hi) {
  HankelComparison out;
  out.by_convolution = hankel_convolve(phi, Gl1Kernel{pi}, m_lo, m_hi);
  out.by_mellin = hankel_via_mellin(phi, gamma_symbol(PiParams::gl1(pi), phi.level()), m_lo, m_hi);
  out.max_diff = max_abs_diff(out.by_convolution, out.by_mellin);
  return out;
}

HomogeneousReport homogeneous_identity_check(const MultChar& chi, const MultChar& pi, const MultStepFunction& phi0) {
  const MultChar pichi = char_product(pi, chi);
  const StepFunction fhat = fourier_transform(untwisted_step(phi0, pi));
  HomogeneousReport r;
  r.lhs = rf_dual_subst(zeta(fhat, char_inverse(pichi)));
  r.rhs = rf_mul(gamma_pv(pi, chi).gamma_pv, rf_shift_half(zeta(phi0, chi)));
  r.discrepancy = rf_discrepancy(r.lhs, r.rhs);
  return r;
}

}  // namespace lfactor
