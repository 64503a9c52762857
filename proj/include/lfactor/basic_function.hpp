#pragma once

#include <vector>

#include "lfactor/characters.hpp"
#include "lfactor/functions.hpp"
#include "lfactor/numerics.hpp"

namespace lfactor {

/// h_m(alpha), the complete homogeneous symmetric polynomial of degree m.
Scalar complete_homogeneous(int m, const std::vector<Scalar>& alpha);

/// The unramified basic function of GL(n) with Satake parameters alpha:
/// Z_p^x-invariant, supported on v >= 0, equal to h_m(alpha) q^{-m/2} / (1 - 1/q) on S_m.
class BasicFunction {
 public:
  BasicFunction(int p, std::vector<Scalar> alpha);

  int p() const { return p_; }
  const std::vector<Scalar>& alpha() const { return alpha_; }
  int n() const { return static_cast<int>(alpha_.size()); }

  Scalar shell_value(int m) const;
  /// Restriction to the shells 0..window, as a level-0 MultStepFunction.
  MultStepFunction truncated(int window) const;
  /// The basic function of the contragredient (parameters alpha^{-1}).
  BasicFunction dual() const;

 private:
  int p_;
  std::vector<Scalar> alpha_;
};

struct BasicZetaReport {
  RationalFunc zeta;      // recovered from the shells 0..window
  RationalFunc expected;  // L(s, pi x chi) = prod 1/(1 - alpha_i t X)
  double residual = 0.0;  // coefficients that must vanish after clearing denominators
  double discrepancy = 0.0;
};

/// Z(s, L_pi, chi) for unramified chi. The truncated zeta polynomial P is
/// multiplied by D = prod (1 - alpha_i t X); the coefficients of D P in
/// degrees n..window must vanish and the rest gives the numerator over D.
BasicZetaReport basic_zeta_check(int p, const std::vector<Scalar>& alpha, const MultChar& chi, int window = 12);

struct BasicFourierReport {
  double mellin_discrepancy = 0.0;  // gamma symbol * M(L_pi) vs. inverted M(L_dual), all components
  double residual = 0.0;
  RationalFunc gamma_times_l;  // gamma(s, pi, psi) L(s, pi)
  RationalFunc l_dual;         // L(1 - s, pi~)
  double l_discrepancy = 0.0;
};

/// F_{pi,psi}(L_pi) = L_{pi~}, checked component by component in the Mellin
/// domain for every unitary omega of conductor <= c_max.
BasicFourierReport basic_fourier_check(int p, const std::vector<Scalar>& alpha, int c_max, int window = 12);

}  // namespace lfactor
