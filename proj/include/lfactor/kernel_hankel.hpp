#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lfactor/characters.hpp"
#include "lfactor/functions.hpp"
#include "lfactor/zeta_gamma.hpp"

namespace lfactor {

/// GL(1) kernel of the representation pi: k(x) = psi(x) pi^{-1}(x) |x|^{1/2}.
struct Gl1Kernel {
  MultChar pi;
};

Scalar kernel_eval(const Gl1Kernel& k, const PAdicElt& x);

/// (psi * c_ell^vee)(x) pi^{-1}(x) |x|^{1/2}, c_ell the normalized indicator
/// of 1 + p^ell Z_p; the convolution is evaluated as a finite average.
struct TruncatedKernel {
  Gl1Kernel base;
  int ell;
};

Scalar kernel_eval(const TruncatedKernel& k, const PAdicElt& x);

/// Average of psi(p^m v z) over z in p^ell Z_p for a unit v: 1 if m + ell >= 0, else 0.
Scalar truncation_factor(int p, int m, int ell);

struct StabilityEntry {
  int ell;
  Scalar coeff;        // Mellin coefficient of the truncated kernel on S_m
  bool matches_full;   // pointwise equality with the full kernel on S_m
};

struct StabilityReport {
  int m = 0;
  Scalar full_coeff;
  std::vector<StabilityEntry> entries;
  /// Smallest ell in the list from which every later entry matches the full kernel.
  std::optional<int> threshold;
};

StabilityReport truncation_stability(const Gl1Kernel& k, int m, const std::vector<int>& ells,
                                     const MultChar& twist);
/// Largest per-shell threshold over [m_lo, m_hi]; nullopt if some shell never stabilizes.
std::optional<int> uniform_stability_threshold(const Gl1Kernel& k, int m_lo, int m_hi, const std::vector<int>& ells,
                                               const MultChar& twist);

using QMatrix = std::vector<std::vector<PRational>>;

struct LemmaReport {
  Scalar average;
  i64 count = 0;  // |K^1_{l0} / K^1_L|
  int denominator_exp = 0;
};

/// (1/|H|) sum_{h in H} psi(tr(g h)), H = (I + p^{l0} M_n(Z_p)) cap SL_n modulo K^1_L.
///
/// Requires n in {2, 3}, p in {2, 3}, 1 <= l0 < L <= 4, and L at least the
/// largest denominator exponent of g (so psi(tr(g .)) is constant on K^1_L-cosets).
LemmaReport trace_average_check(int p, const QMatrix& g, int l0, int L);

struct LemmaCase {
  std::string branch;
  QMatrix g;
  int l0;
  int L;
  Scalar expected;
};

/// Deterministic grid of trace-average instances for one prime, plus the g = I_2 control.
std::vector<LemmaCase> lemma31_grid(int p, std::uint64_t seed);

/// GL(n) parameter given as a list of GL(1) characters (Satake parameters
/// become unramified characters with t = alpha_i).
struct PiParams {
  int p = 2;
  std::vector<MultChar> chars;
  bool from_satake = false;

  static PiParams satake(int p, const std::vector<Scalar>& alpha);
  static PiParams gl1(const MultChar& chi);
  int n() const { return static_cast<int>(chars.size()); }
  PiParams contragredient() const;
};

/// Components omega -> gamma(s + 1/2, pi x omega, psi) for cond(omega) <= c_max.
struct GammaSymbol {
  PiParams params;
  int c_max = 0;
  MellinData comps;
};

GammaSymbol gamma_symbol(const PiParams& params, int c_max);

/// Mellin data of F_{pi,psi}(phi): component at omega^{-1} is
/// (gamma_omega * M(phi)(omega)) with X replaced by X^{-1}.
MellinData hankel_mellin(const MultStepFunction& phi, const GammaSymbol& gsym);

/// (k * phi^vee)(x) = int k(y) phi(x^{-1} y) d^x y on shells [m_lo, m_hi],
/// exact coset sums; with ell set, the truncated kernel k_ell is used.
MultStepFunction hankel_convolve(const MultStepFunction& phi, const Gl1Kernel& k, int m_lo, int m_hi,
                                 std::optional<int> ell = std::nullopt);

/// Pointwise values of F_{pi,psi}(phi) on [m_lo, m_hi] from hankel_mellin.
MultStepFunction hankel_via_mellin(const MultStepFunction& phi, const GammaSymbol& gsym, int m_lo, int m_hi);

struct HankelComparison {
  MultStepFunction by_convolution;
  MultStepFunction by_mellin;
  double max_diff = 0.0;
};

HankelComparison hankel_both(const MultStepFunction& phi, const MultChar& pi, int m_lo, int m_hi);

struct HomogeneousReport {
  RationalFunc lhs;  // (chi_s^{-1}, F_{pi,psi}(phi0))
  RationalFunc rhs;  // gamma(1/2, pi x chi_s, psi) (chi_s, phi0)
  double discrepancy = 0.0;
};

/// The pairing of F_{pi,psi}(phi0) with chi_s^{-1} is computed through the
/// additive Fourier transform; the gamma factor on the right is the kernel's
/// principal value Mellin transform.
HomogeneousReport homogeneous_identity_check(const MultChar& chi, const MultChar& pi, const MultStepFunction& phi0);

}  // namespace lfactor
