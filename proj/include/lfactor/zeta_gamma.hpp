#pragma once

#include <optional>
#include <vector>

#include "lfactor/characters.hpp"
#include "lfactor/functions.hpp"
#include "lfactor/numerics.hpp"

namespace lfactor {

/// Z(s, phi, chi) = int phi(x) chi(x) |x|^{s - 1/2} d^x x as a function of X.
///
/// For a StepFunction the shells below tail_start() are integrated by coset
/// enumeration and the constant germ at 0 is summed as a geometric tail.
RationalFunc zeta(const StepFunction& f, const MultChar& chi);
RationalFunc zeta(const MultStepFunction& f, const MultChar& chi);

/// 1 / (1 - t X) for unramified chi, 1 otherwise.
RationalFunc l_factor(const MultChar& chi);
/// prod_i 1 / (1 - alpha_i X)
RationalFunc l_factor_satake(int q, const std::vector<Scalar>& alpha);

/// sum_{u in (Z/p^a)^x} omega(u) psi(u / p^a), a = cond(omega); psi^{-1} on request.
Scalar gauss_sum(const MultChar& omega, bool inverse_psi = false);

/// epsilon(s, chi, psi) = t^a g(chi^{-1}) X^a for conductor a >= 1, else 1.
RationalFunc epsilon_factor(const MultChar& chi, bool inverse_psi = false);

/// epsilon(s, chi, psi) L(1 - s, chi^{-1}) / L(s, chi)
RationalFunc gamma_closed(const MultChar& chi, bool inverse_psi = false);

/// int_{S_m} psi(x) omega_0(x) d^x x, omega_0 the unit part of omega, by
/// enumeration of units modulo p^max(cond, -m, 1).
Scalar shell_psi_integral(int m, const MultChar& omega);

struct GammaReport {
  RationalFunc gamma_closed;  // gamma(s + 1/2, pi x chi, psi) from the closed form
  RationalFunc gamma_pv;      // the principal value shell sum
  double max_coeff_diff = 0.0;
  int shell_lo = 0;  // shells brute-forced, the tail starts at shell_hi + 1
  int shell_hi = -1;
};

/// Principal value Mellin transform of the GL(1) kernel
/// k(x) = psi(x) pi^{-1}(x) |x|^{1/2} against chi_s(x^{-1}).
///
/// Shells [-depth, -1] are summed by enumeration (depth defaults to
/// max(cond(pi chi), 1)); two further shells are checked to vanish and the
/// shells m >= 0 are summed in closed form.
GammaReport gamma_pv(const MultChar& pi, const MultChar& chi, std::optional<int> depth = std::nullopt);

struct FeReport {
  RationalFunc lhs;  // Z(1 - s, F_pi phi, chi^{-1})
  RationalFunc rhs;  // gamma(s, pi x chi, psi) Z(s, phi, chi)
  double discrepancy = 0.0;
};

/// GL(1) functional equation for the representation pi (a character).
///
/// A StepFunction f stands for phi = |x|^{1/2} pi(x) f(x), whose Fourier
/// operator image is |x|^{1/2} pi^{-1}(x) F_psi(f)(x). A MultStepFunction is
/// phi itself and is brought to that form first.
FeReport verify_fe(const StepFunction& f, const MultChar& chi, const MultChar& pi);
FeReport verify_fe(const MultStepFunction& phi, const MultChar& chi, const MultChar& pi);

/// |x|^{-1/2} pi^{-1}(x) phi(x) as a StepFunction.
StepFunction untwisted_step(const MultStepFunction& phi, const MultChar& pi);

}  // namespace lfactor
