#pragma once

#include <map>
#include <utility>
#include <vector>

#include "lfactor/characters.hpp"
#include "lfactor/numerics.hpp"
#include "lfactor/padic.hpp"

namespace lfactor {

class FunctionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// coeff * psi(twist * x) * 1_{center + p^rad Z_p}(x)
///
/// Reduced form: center in [0, p^rad) and twist in [0, p^{-rad}) as real
/// numbers; the coefficient absorbs the constant psi((a - a') * center).
struct StepTerm {
  Scalar coeff;
  PRational twist;
  PRational center;
  int rad;
};

/// Finite linear combination of psi-twisted balls: a Schwartz-Bruhat function on Q_p.
class StepFunction {
 public:
  explicit StepFunction(int p = 2);

  /// Adds coeff * psi(twist x) 1_{center + p^rad Z_p}; reduces on insertion.
  StepFunction& add(Scalar coeff, const PRational& twist, const PRational& center, int rad);
  /// 1_{center + p^rad Z_p}
  static StepFunction ball(int p, const PRational& center, int rad, Scalar coeff = 1.0);

  int p() const { return p_; }
  const std::vector<StepTerm>& terms() const { return terms_; }

  Scalar eval(const PRational& x) const;
  /// Value on a neighbourhood of 0.
  Scalar value_at_zero() const;

  StepFunction operator+(const StepFunction& o) const;
  StepFunction scaled(Scalar c) const;

  /// Shells m with possibly nonzero values strictly below the tail: f is
  /// constant (equal to value_at_zero) on every S_m with m >= tail_start().
  int shell_lo() const;
  int tail_start() const;

 private:
  int p_;
  std::vector<StepTerm> terms_;
};

StepFunction fourier_transform(const StepFunction& f, bool inverse_psi = false);

/// Exact <f, g> = int f conj(g) d^+x.
Scalar l2_inner(const StepFunction& f, const StepFunction& g);
double l2_norm2(const StepFunction& f);

/// int_{S_m} f(x) chi_0(x) d^x x with chi_0 the unit part of chi (t ignored).
Scalar shell_integral(const StepFunction& f, int m, const MultChar& chi);

/// Locally constant function on Q_p^x with compact support, stored on the
/// cosets p^m r (1 + p^K Z_p) (K >= 1) or p^m Z_p^x (K = 0) at a common level K.
/// Keys are (m, r mod p^K), with r = 0 at level 0.
class MultStepFunction {
 public:
  explicit MultStepFunction(int p = 2, int level = 0);

  /// Adds coeff on rep (1 + p^k Z_p), or on rep Z_p^x when k = 0.
  MultStepFunction& add(Scalar coeff, const PAdicElt& rep, int k);
  MultStepFunction& add_value(int m, i64 residue, Scalar value);
  /// 1_{rep (1 + p^k Z_p)}
  static MultStepFunction coset(int p, const PAdicElt& rep, int k, Scalar coeff = 1.0);

  int p() const { return p_; }
  int level() const { return level_; }
  const std::map<std::pair<int, i64>, Scalar>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  MultStepFunction refined(int level) const;
  Scalar value(int m, i64 residue) const;
  Scalar eval(const PAdicElt& x) const;
  /// (coeff, rep, level) triples, one per stored coset.
  std::vector<std::tuple<Scalar, PAdicElt, int>> terms() const;
  int shell_lo() const;
  int shell_hi() const;
  double l1_norm() const;

  MultStepFunction operator+(const MultStepFunction& o) const;
  MultStepFunction scaled(Scalar c) const;
  /// x -> f(a^{-1} x)
  MultStepFunction dilated(const PAdicElt& a) const;
  /// x -> f(x^{-1})
  MultStepFunction inverted() const;
  /// Pointwise product with chi (its unit part and t^m).
  MultStepFunction times_char(const MultChar& chi) const;
  /// Pointwise product with |x|^e.
  MultStepFunction times_abs_power(double e) const;
  /// Drops cosets whose value is below tol in absolute value.
  MultStepFunction cleaned(double tol) const;

 private:
  int p_;
  int level_;
  std::map<std::pair<int, i64>, Scalar> values_;
};

/// The same function written as a StepFunction (one ball per coset).
StepFunction as_step_function(const MultStepFunction& f);

/// Largest pointwise difference after refining to a common level.
double max_abs_diff(const MultStepFunction& a, const MultStepFunction& b);

/// (f * g)(x) = int f(y) g(y^{-1} x) d^x y
MultStepFunction mult_convolve(const MultStepFunction& f, const MultStepFunction& g);

/// omega -> M(f)(omega)(X) = sum_m X^m int_{S_m} f omega d^x, omega unitary (t = 1).
class MellinData {
 public:
  explicit MellinData(int p = 2) : p_(p) {}

  int p() const { return p_; }
  const std::map<MultChar, RationalFunc, UnitPartLess>& comps() const { return comps_; }
  void set(const MultChar& omega, const RationalFunc& value);
  /// Stored component, or the zero function.
  RationalFunc component(const MultChar& omega) const;
  int max_conductor() const;

 private:
  int p_;
  std::map<MultChar, RationalFunc, UnitPartLess> comps_;
};

MellinData mellin(const MultStepFunction& f);

/// Reconstructs f on shells [m_lo, m_hi] at level c_max by character sums
/// against the series coefficients of every component.
MultStepFunction mellin_invert(const MellinData& d, int m_lo, int m_hi, int c_max);

/// Largest coefficient discrepancy over the union of components.
double mellin_discrepancy(const MellinData& a, const MellinData& b);

}  // namespace lfactor
