#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace lfactor {

using Scalar = std::complex<double>;

/// Default absolute tolerance on canonical-form coefficients.
inline constexpr double kCoeffTol = 1e-10;

class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Laurent polynomial in the formal variable X = q^{-s}.
///
/// Coefficients are stored sparsely by exponent; exact zeros (and entries
/// below a tiny relative threshold after arithmetic) are never stored.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(int q);
  LaurentPoly(int q, std::map<int, Scalar> coeffs);

  static LaurentPoly constant(int q, Scalar c);
  static LaurentPoly monomial(int q, Scalar c, int exponent);

  int q() const { return q_; }
  const std::map<int, Scalar>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int min_exp() const;
  int max_exp() const;
  Scalar coeff(int exponent) const;
  double max_abs() const;

  Scalar eval(Scalar x) const;

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator-() const;
  LaurentPoly scaled(Scalar c) const;
  /// Multiply by X^k.
  LaurentPoly shifted(int k) const;
  /// X -> c X.
  LaurentPoly subst_scale(Scalar c) const;
  /// X -> X^{-1}.
  LaurentPoly subst_inverse() const;

 private:
  void check_q(const LaurentPoly& o) const;
  void clean();

  int q_ = 0;
  std::map<int, Scalar> coeffs_;
};

/// Ratio of Laurent polynomials, kept in canonical form: the denominator is
/// an ordinary polynomial with constant term 1, every monomial factor lives
/// in the numerator, and numerically exact common factors are cancelled.
class RationalFunc {
 public:
  RationalFunc() = default;
  explicit RationalFunc(const LaurentPoly& num);
  RationalFunc(const LaurentPoly& num, const LaurentPoly& den);

  static RationalFunc constant(int q, Scalar c);
  static RationalFunc monomial(int q, Scalar c, int exponent);
  /// 1 / prod_i (1 - roots_i X)
  static RationalFunc inverse_product(int q, const std::vector<Scalar>& params);

  int q() const { return num_.q(); }
  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_laurent() const { return den_.coeffs().size() == 1; }

  Scalar eval_x(Scalar x) const;
  /// Evaluate at a complex s, X = q^{-s}.
  Scalar eval_s(Scalar s) const;

 private:
  void canonicalize();

  LaurentPoly num_;
  LaurentPoly den_;
};

RationalFunc rf_add(const RationalFunc& a, const RationalFunc& b);
RationalFunc rf_sub(const RationalFunc& a, const RationalFunc& b);
RationalFunc rf_mul(const RationalFunc& a, const RationalFunc& b);
RationalFunc rf_div(const RationalFunc& a, const RationalFunc& b);
RationalFunc rf_scale(const RationalFunc& a, Scalar c);

/// s -> 1 - s, i.e. X -> q^{-1} X^{-1}.
RationalFunc rf_dual_subst(const RationalFunc& a);
/// X -> c X. With c = q^{-1/2} this realises s -> s + 1/2.
RationalFunc rf_subst_scale(const RationalFunc& a, Scalar c);
/// X -> X^{-1}, i.e. s -> -s.
RationalFunc rf_subst_inverse(const RationalFunc& a);
/// s -> s + 1/2.
RationalFunc rf_shift_half(const RationalFunc& a);

/// Coefficients of X^m, m in [m_lo, m_hi], of the expansion around X = 0.
std::vector<Scalar> rf_series_coeffs(const RationalFunc& a, int m_lo, int m_hi);

/// Largest coefficient of a.num * b.den - b.num * a.den, divided by the
/// size of the products when that exceeds 1.
double rf_discrepancy(const RationalFunc& a, const RationalFunc& b);
bool rf_equal(const RationalFunc& a, const RationalFunc& b, double tol = kCoeffTol);

/// Roots of an ordinary polynomial given by ascending coefficients.
std::vector<Scalar> poly_roots(const std::vector<Scalar>& ascending);

}  // namespace lfactor
