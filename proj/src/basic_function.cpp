#include "lfactor/basic_function.hpp"

#include <algorithm>
#include <cmath>

#include "lfactor/kernel_hankel.hpp"
#include "lfactor/zeta_gamma.hpp"

namespace lfactor {

namespace {

LaurentPoly denominator(int q, const std::vector<Scalar>& roots) {
  LaurentPoly d = LaurentPoly::constant(q, 1.0);
  for (const auto& a : roots) d = d * LaurentPoly(q, {{0, 1.0}, {1, -a}});
  return d;
}

// Rational form N / D of a power series known on degrees 0..window, with D given.
// Returns the form and the largest coefficient of D * P in degrees deg(D)..window.
std::pair<RationalFunc, double> recover(const LaurentPoly& series, const LaurentPoly& d, int window) {
  const int q = d.q();
  const int n = d.max_exp();
  const LaurentPoly prod = series * d;
  std::map<int, Scalar> low;
  double residual = 0.0;
  for (const auto& [e, c] : prod.coeffs()) {
    if (e < n) low[e] = c;
    else if (e <= window) residual = std::max(residual, std::abs(c));
  }
  return {RationalFunc(LaurentPoly(q, low), d), residual};
}

}  // namespace

Scalar complete_homogeneous(int m, const std::vector<Scalar>& alpha) {
  if (m < 0) throw NumericsError("complete_homogeneous: negative degree");
  return rf_series_coeffs(l_factor_satake(2, alpha), m, m).front();
}

BasicFunction::BasicFunction(int p, std::vector<Scalar> alpha) : p_(p), alpha_(std::move(alpha)) {
  if (!is_prime(p)) throw FunctionError("BasicFunction: p must be prime");
  for (const auto& a : alpha_)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || std::abs(a) == 0.0)
      throw FunctionError("BasicFunction: Satake parameters must be finite and nonzero");
}

Scalar BasicFunction::shell_value(int m) const {
  if (m < 0) return 0.0;
  const double q = p_;
  return complete_homogeneous(m, alpha_) * std::pow(q, -0.5 * m) / (1.0 - 1.0 / q);
}

MultStepFunction BasicFunction::truncated(int window) const {
  MultStepFunction f(p_, 0);
  const auto h = rf_series_coeffs(l_factor_satake(p_, alpha_), 0, window);
  const double q = p_;
  for (int m = 0; m <= window; ++m) f.add_value(m, 0, h[m] * std::pow(q, -0.5 * m) / (1.0 - 1.0 / q));
  return f;
}

BasicFunction BasicFunction::dual() const {
  std::vector<Scalar> inv;
  for (const auto& a : alpha_) inv.push_back(1.0 / a);
  return BasicFunction(p_, inv);
}

BasicZetaReport basic_zeta_check(int p, const std::vector<Scalar>& alpha, const MultChar& chi, int window) {
  if (chi.is_ramified()) throw FunctionError("basic_zeta_check: chi must be unramified");
  if (chi.p() != p) throw FunctionError("basic_zeta_check: mismatched primes");
  if (window < static_cast<int>(alpha.size())) throw FunctionError("basic_zeta_check: window shorter than n");
  const BasicFunction b(p, alpha);
  std::vector<Scalar> twisted;
  for (const auto& a : alpha) twisted.push_back(a * chi.t());
  const RationalFunc poly = zeta(b.truncated(window), chi);
  if (!poly.is_laurent()) throw NumericsError("basic_zeta_check: truncated zeta is not a polynomial");
  const Scalar c = poly.den().coeff(0);
  BasicZetaReport r;
  auto [form, residual] = recover(poly.num().scaled(1.0 / c), denominator(p, twisted), window);
  r.zeta = form;
  r.residual = residual;
  r.expected = l_factor_satake(p, twisted);
  r.discrepancy = std::max(residual, rf_discrepancy(r.zeta, r.expected));
  return r;
}

BasicFourierReport basic_fourier_check(int p, const std::vector<Scalar>& alpha, int c_max, int window) {
  const BasicFunction b(p, alpha);
  const BasicFunction bd = b.dual();
  const double rq = std::sqrt(static_cast<double>(p));
  auto mellin_of = [&](const BasicFunction& f, double& residual) {
    std::vector<Scalar> roots;
    for (const auto& a : f.alpha()) roots.push_back(a / rq);
    const MellinData raw = mellin(f.truncated(window));
    MellinData out(p);
    for (const auto& [omega, m] : raw.comps()) {
      if (omega.is_ramified()) {
        residual = std::max(residual, m.num().max_abs());
        continue;
      }
      const Scalar c = m.den().coeff(0);
      auto [form, res] = recover(m.num().scaled(1.0 / c), denominator(p, roots), window);
      residual = std::max(residual, res);
      out.set(omega, form);
    }
    return out;
  };
  BasicFourierReport r;
  const MellinData m_pi = mellin_of(b, r.residual);
  const MellinData m_dual = mellin_of(bd, r.residual);
  const GammaSymbol gsym = gamma_symbol(PiParams::satake(p, alpha), c_max);
  double worst = 0.0;
  for (const auto& [omega, g] : gsym.comps.comps()) {
    const RationalFunc lhs = rf_mul(g, m_pi.component(omega));
    const RationalFunc rhs = rf_subst_inverse(m_dual.component(char_inverse(omega)));
    worst = std::max(worst, rf_discrepancy(lhs, rhs));
  }
  r.mellin_discrepancy = std::max(worst, r.residual);

  RationalFunc gam = RationalFunc::constant(p, 1.0);
  for (const auto& a : alpha) gam = rf_mul(gam, gamma_closed(MultChar::unramified(p, a)));
  r.gamma_times_l = rf_mul(gam, l_factor_satake(p, alpha));
  std::vector<Scalar> inv;
  for (const auto& a : alpha) inv.push_back(1.0 / a);
  r.l_dual = rf_dual_subst(l_factor_satake(p, inv));
  r.l_discrepancy = rf_discrepancy(r.gamma_times_l, r.l_dual);
  return r;
}

}  // namespace lfactor
