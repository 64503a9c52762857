#include "lfactor/zeta_gamma.hpp"

#include <cmath>
#include <map>

namespace lfactor {

namespace {

constexpr double kGuardTol = 1e-12;

double sqrt_q(int q) { return std::sqrt(static_cast<double>(q)); }

}  // namespace

RationalFunc zeta(const StepFunction& f, const MultChar& chi) {
  const int q = f.p();
  if (chi.p() != q) throw FunctionError("zeta: mismatched primes");
  if (f.terms().empty()) return RationalFunc::constant(q, 0.0);
  const Scalar step = chi.t() * sqrt_q(q);
  const int lo = f.shell_lo();
  const int hi = f.tail_start();
  std::map<int, Scalar> coeffs;
  for (int m = lo; m < hi; ++m) coeffs[m] = shell_integral(f, m, chi) * std::pow(step, m);
  RationalFunc out{LaurentPoly(q, coeffs)};
  const Scalar f0 = f.value_at_zero();
  if (!chi.is_ramified() && f0 != Scalar(0.0)) {
    // sum_{m >= hi} f(0) (1 - 1/q) (t q^{1/2} X)^m
    const LaurentPoly num = LaurentPoly::monomial(q, f0 * shell_volume(0, q) * std::pow(step, hi), hi);
    const LaurentPoly den(q, {{0, 1.0}, {1, -step}});
    out = rf_add(out, RationalFunc(num, den));
  }
  return out;
}

RationalFunc zeta(const MultStepFunction& f, const MultChar& chi) {
  const int q = f.p();
  if (chi.p() != q) throw FunctionError("zeta: mismatched primes");
  // chi_0 integrates to zero over every coset when it is nontrivial on 1 + p^K Z_p.
  if (chi.cond() > f.level()) return RationalFunc::constant(q, 0.0);
  const auto table = chi.unit_table(f.level());
  const double vol = coset_volume(q, f.level());
  const Scalar step = chi.t() * sqrt_q(q);
  std::map<int, Scalar> coeffs;
  for (const auto& [key, v] : f.values()) coeffs[key.first] += v * table[key.second] * vol * std::pow(step, key.first);
  return RationalFunc(LaurentPoly(q, coeffs));
}

RationalFunc l_factor(const MultChar& chi) {
  if (chi.is_ramified()) return RationalFunc::constant(chi.p(), 1.0);
  return RationalFunc::inverse_product(chi.p(), {chi.t()});
}

RationalFunc l_factor_satake(int q, const std::vector<Scalar>& alpha) {
  return RationalFunc::inverse_product(q, alpha);
}

Scalar gauss_sum(const MultChar& omega, bool inverse_psi) {
  const int a = omega.cond();
  const int p = omega.p();
  const i64 mod = ipow(p, a);
  Scalar s = 0.0;
  for (i64 u = 1; u < mod || (mod == 1 && u == 1); ++u) {
    if (mod > 1 && u % p == 0) continue;
    s += omega.unit_value(u) * unit_root(inverse_psi ? -u : u, mod);
    if (mod == 1) break;
  }
  return s;
}

RationalFunc epsilon_factor(const MultChar& chi, bool inverse_psi) {
  const int a = chi.cond();
  if (a == 0) return RationalFunc::constant(chi.p(), 1.0);
  const Scalar g = gauss_sum(char_inverse(chi).unitary(), inverse_psi);
  return RationalFunc::monomial(chi.p(), std::pow(chi.t(), a) * g, a);
}

RationalFunc gamma_closed(const MultChar& chi, bool inverse_psi) {
  const RationalFunc l_dual = rf_dual_subst(l_factor(char_inverse(chi)));
  return rf_div(rf_mul(epsilon_factor(chi, inverse_psi), l_dual), l_factor(chi));
}

Scalar shell_psi_integral(int m, const MultChar& omega) {
  const int p = omega.p();
  const int n = std::max({omega.cond(), -m, 1});
  const i64 mod = ipow(p, n);
  const auto table = omega.unit_table(n);
  // psi(p^m u) depends on u mod p^{-m} when m < 0.
  const i64 den = m < 0 ? ipow(p, -m) : 1;
  Scalar s = 0.0;
  for (i64 u = 1; u < mod; ++u) {
    if (u % p == 0) continue;
    const Scalar ps = m < 0 ? unit_root(u % den, den) : Scalar(1.0);
    s += ps * table[u];
  }
  return s / static_cast<double>(mod);
}

GammaReport gamma_pv(const MultChar& pi, const MultChar& chi, std::optional<int> depth) {
  const int q = pi.p();
  const MultChar omega = char_product(pi, chi);
  const MultChar omega_inv = char_inverse(omega);
  const int min_depth = std::max(omega.cond(), 1);
  const int ell = depth.value_or(min_depth);
  if (ell < min_depth) throw FunctionError("gamma_pv: truncation depth below the conductor");
  const Scalar t_inv = 1.0 / omega.t();
  const double rq = sqrt_q(q);

  // Shell m carries q^{-m/2} t^{-m} X^{-m} int_{S_m} psi omega_0^{-1} d^x.
  std::map<int, Scalar> coeffs;
  for (int m = -ell; m <= -1; ++m) {
    const Scalar i_m = shell_psi_integral(m, omega_inv.unitary());
    coeffs[-m] += std::pow(rq, -m) * std::pow(t_inv, m) * i_m;
  }
  for (int m = -ell - 2; m <= -ell - 1; ++m) {
    if (std::abs(shell_psi_integral(m, omega_inv.unitary())) > kGuardTol)
      throw FunctionError("gamma_pv: guard shell " + std::to_string(m) + " does not vanish");
  }
  RationalFunc pv{LaurentPoly(q, coeffs)};
  const Scalar i0 = shell_psi_integral(0, omega_inv.unitary());
  if (std::abs(i0) > kGuardTol) {
    // sum_{m >= 0} I_0 (t^{-1} q^{-1/2} X^{-1})^m
    const LaurentPoly num = LaurentPoly::constant(q, i0);
    const LaurentPoly den(q, {{0, 1.0}, {-1, -t_inv / rq}});
    pv = rf_add(pv, RationalFunc(num, den));
  }
  GammaReport rep;
  rep.gamma_closed = rf_shift_half(gamma_closed(omega));
  rep.gamma_pv = pv;
  rep.max_coeff_diff = rf_discrepancy(rep.gamma_closed, rep.gamma_pv);
  rep.shell_lo = -ell;
  rep.shell_hi = -1;
  return rep;
}

StepFunction untwisted_step(const MultStepFunction& phi, const MultChar& pi) {
  const int level = std::max({phi.level(), pi.cond(), 1});
  return as_step_function(phi.refined(level).times_char(char_inverse(pi)).times_abs_power(-0.5));
}

namespace {

RationalFunc fe_lhs(const StepFunction& f, const MultChar& pichi) {
  const StepFunction fhat = fourier_transform(f);
  return rf_dual_subst(rf_shift_half(zeta(fhat, char_inverse(pichi))));
}

}  // namespace

FeReport verify_fe(const StepFunction& f, const MultChar& chi, const MultChar& pi) {
  const MultChar pichi = char_product(pi, chi);
  FeReport r;
  r.lhs = fe_lhs(f, pichi);
  r.rhs = rf_mul(gamma_closed(pichi), rf_shift_half(zeta(f, pichi)));
  r.discrepancy = rf_discrepancy(r.lhs, r.rhs);
  return r;
}

FeReport verify_fe(const MultStepFunction& phi, const MultChar& chi, const MultChar& pi) {
  const MultChar pichi = char_product(pi, chi);
  FeReport r;
  r.lhs = fe_lhs(untwisted_step(phi, pi), pichi);
  r.rhs = rf_mul(gamma_closed(pichi), zeta(phi, chi));
  r.discrepancy = rf_discrepancy(r.lhs, r.rhs);
  return r;
}

}  // namespace lfactor
