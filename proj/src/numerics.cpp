#include "lfactor/numerics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace lfactor {

namespace {

// Entries below this fraction of the largest coefficient are roundoff.
constexpr double kCleanRel = 1e-15;
// Remainder bound (relative) accepted when cancelling a common root.
constexpr double kCancelRel = 1e-13;

bool finite(Scalar c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

// ---------------------------------------------------------------------------
// LaurentPoly
// ---------------------------------------------------------------------------

LaurentPoly::LaurentPoly(int q) : q_(q) {
  if (q < 2) throw NumericsError("LaurentPoly: q must be an integer > 1");
}

LaurentPoly::LaurentPoly(int q, std::map<int, Scalar> coeffs) : LaurentPoly(q) {
  coeffs_ = std::move(coeffs);
  clean();
}

LaurentPoly LaurentPoly::constant(int q, Scalar c) { return monomial(q, c, 0); }

LaurentPoly LaurentPoly::monomial(int q, Scalar c, int exponent) {
  return LaurentPoly(q, {{exponent, c}});
}

void LaurentPoly::clean() {
  double mx = 0.0;
  for (const auto& [e, c] : coeffs_) {
    if (!finite(c)) throw NumericsError("LaurentPoly: non-finite coefficient");
    mx = std::max(mx, std::abs(c));
  }
  const double cut = mx * kCleanRel;
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (std::abs(it->second) <= cut || it->second == Scalar(0.0))
      it = coeffs_.erase(it);
    else
      ++it;
  }
}

void LaurentPoly::check_q(const LaurentPoly& o) const {
  if (q_ != o.q_) throw NumericsError("LaurentPoly: mismatched q");
}

int LaurentPoly::min_exp() const {
  if (coeffs_.empty()) throw NumericsError("LaurentPoly: zero polynomial has no exponents");
  return coeffs_.begin()->first;
}

int LaurentPoly::max_exp() const {
  if (coeffs_.empty()) throw NumericsError("LaurentPoly: zero polynomial has no exponents");
  return coeffs_.rbegin()->first;
}

Scalar LaurentPoly::coeff(int exponent) const {
  auto it = coeffs_.find(exponent);
  return it == coeffs_.end() ? Scalar(0.0) : it->second;
}

double LaurentPoly::max_abs() const {
  double mx = 0.0;
  for (const auto& [e, c] : coeffs_) mx = std::max(mx, std::abs(c));
  return mx;
}

Scalar LaurentPoly::eval(Scalar x) const {
  Scalar acc = 0.0;
  for (const auto& [e, c] : coeffs_) acc += c * std::pow(x, e);
  return acc;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  check_q(o);
  auto out = coeffs_;
  for (const auto& [e, c] : o.coeffs_) out[e] += c;
  return LaurentPoly(q_, std::move(out));
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator-() const { return scaled(-1.0); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  check_q(o);
  std::map<int, Scalar> out;
  for (const auto& [e1, c1] : coeffs_)
    for (const auto& [e2, c2] : o.coeffs_) out[e1 + e2] += c1 * c2;
  return LaurentPoly(q_, std::move(out));
}

LaurentPoly LaurentPoly::scaled(Scalar c) const {
  std::map<int, Scalar> out;
  for (const auto& [e, v] : coeffs_) out[e] = v * c;
  return LaurentPoly(q_, std::move(out));
}

LaurentPoly LaurentPoly::shifted(int k) const {
  std::map<int, Scalar> out;
  for (const auto& [e, v] : coeffs_) out[e + k] = v;
  return LaurentPoly(q_, std::move(out));
}

LaurentPoly LaurentPoly::subst_scale(Scalar c) const {
  std::map<int, Scalar> out;
  for (const auto& [e, v] : coeffs_) out[e] = v * std::pow(c, e);
  return LaurentPoly(q_, std::move(out));
}

LaurentPoly LaurentPoly::subst_inverse() const {
  std::map<int, Scalar> out;
  for (const auto& [e, v] : coeffs_) out[-e] = v;
  return LaurentPoly(q_, std::move(out));
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

std::vector<Scalar> poly_roots(const std::vector<Scalar>& ascending) {
  int deg = static_cast<int>(ascending.size()) - 1;
  while (deg > 0 && ascending[deg] == Scalar(0.0)) --deg;
  if (deg <= 0) return {};
  if (deg == 1) return {-ascending[0] / ascending[1]};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -ascending[i] / ascending[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericsError("poly_roots: eigensolver failed");
  std::vector<Scalar> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = solver.eigenvalues()(i);
  return roots;
}

namespace {

std::vector<Scalar> dense(const LaurentPoly& p, int lo) {
  std::vector<Scalar> out(p.max_exp() - lo + 1, 0.0);
  for (const auto& [e, c] : p.coeffs()) out[e - lo] = c;
  return out;
}

// Divide ascending coefficients by (X - r). Returns remainder.
Scalar divide_linear(std::vector<Scalar>& coeffs, Scalar r) {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  std::vector<Scalar> quot(deg, 0.0);
  Scalar carry = coeffs[deg];
  for (int k = deg - 1; k >= 0; --k) {
    quot[k] = carry;
    carry = coeffs[k] + r * carry;
  }
  coeffs = std::move(quot);
  return carry;
}

double abs_scale(const std::vector<Scalar>& coeffs, Scalar r) {
  double s = 0.0;
  double rk = 1.0;
  for (const auto& c : coeffs) {
    s += std::abs(c) * rk;
    rk *= std::abs(r);
  }
  return s;
}

LaurentPoly from_dense(int q, const std::vector<Scalar>& coeffs, int lo) {
  std::map<int, Scalar> m;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != Scalar(0.0)) m[lo + static_cast<int>(i)] = coeffs[i];
  return LaurentPoly(q, std::move(m));
}

double cross_discrepancy(const LaurentPoly& an, const LaurentPoly& ad, const LaurentPoly& bn,
                         const LaurentPoly& bd) {
  return (an * bd - bn * ad).max_abs();
}

}  // namespace

// ---------------------------------------------------------------------------
// RationalFunc
// ---------------------------------------------------------------------------

RationalFunc::RationalFunc(const LaurentPoly& num) : RationalFunc(num, LaurentPoly::constant(num.q(), 1.0)) {}

RationalFunc::RationalFunc(const LaurentPoly& num, const LaurentPoly& den) : num_(num), den_(den) {
  if (num.q() != den.q()) throw NumericsError("RationalFunc: mismatched q");
  canonicalize();
}

RationalFunc RationalFunc::constant(int q, Scalar c) { return RationalFunc(LaurentPoly::constant(q, c)); }

RationalFunc RationalFunc::monomial(int q, Scalar c, int exponent) {
  return RationalFunc(LaurentPoly::monomial(q, c, exponent));
}

RationalFunc RationalFunc::inverse_product(int q, const std::vector<Scalar>& params) {
  LaurentPoly den = LaurentPoly::constant(q, 1.0);
  for (const auto& a : params) den = den * LaurentPoly(q, {{0, 1.0}, {1, -a}});
  return RationalFunc(LaurentPoly::constant(q, 1.0), den);
}

void RationalFunc::canonicalize() {
  if (den_.is_zero()) throw NumericsError("RationalFunc: zero denominator");
  const int q = den_.q();
  if (num_.is_zero()) {
    num_ = LaurentPoly(q);
    den_ = LaurentPoly::constant(q, 1.0);
    return;
  }
  {
    const int k0 = den_.min_exp();
    const Scalar d0 = den_.coeff(k0);
    den_ = den_.shifted(-k0).scaled(1.0 / d0);
    num_ = num_.shifted(-k0).scaled(1.0 / d0);
  }
  if (den_.max_exp() == 0) return;

  // Cancel common linear factors whose division is numerically exact.
  const LaurentPoly orig_num = num_;
  const LaurentPoly orig_den = den_;
  const int lo = num_.min_exp();
  std::vector<Scalar> n = dense(num_, lo);
  std::vector<Scalar> d = dense(den_, 0);
  bool changed = false;
  for (const Scalar r : poly_roots(d)) {
    if (n.size() < 2 || d.size() < 2) break;
    std::vector<Scalar> nq = n;
    const Scalar nrem = divide_linear(nq, r);
    if (std::abs(nrem) > kCancelRel * abs_scale(n, r)) continue;
    std::vector<Scalar> dq = d;
    const Scalar drem = divide_linear(dq, r);
    if (std::abs(drem) > kCancelRel * abs_scale(d, r)) continue;
    n = std::move(nq);
    d = std::move(dq);
    changed = true;
  }
  if (!changed) return;
  LaurentPoly new_num = from_dense(q, n, lo);
  LaurentPoly new_den = from_dense(q, d, 0);
  const Scalar d0 = new_den.coeff(0);
  if (std::abs(d0) == 0.0) return;
  new_num = new_num.scaled(1.0 / d0);
  new_den = new_den.scaled(1.0 / d0);
  const double scale = std::max(1.0, orig_num.max_abs() * orig_den.max_abs());
  if (cross_discrepancy(new_num, new_den, orig_num, orig_den) > kCancelRel * 10 * scale) return;
  num_ = std::move(new_num);
  den_ = std::move(new_den);
}

Scalar RationalFunc::eval_x(Scalar x) const {
  const Scalar d = den_.eval(x);
  if (std::abs(d) == 0.0) throw NumericsError("RationalFunc: evaluation at a pole");
  return num_.eval(x) / d;
}

Scalar RationalFunc::eval_s(Scalar s) const {
  return eval_x(std::exp(-s * std::log(static_cast<double>(q()))));
}

RationalFunc rf_add(const RationalFunc& a, const RationalFunc& b) {
  return RationalFunc(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
}

RationalFunc rf_sub(const RationalFunc& a, const RationalFunc& b) {
  return RationalFunc(a.num() * b.den() - b.num() * a.den(), a.den() * b.den());
}

RationalFunc rf_mul(const RationalFunc& a, const RationalFunc& b) {
  return RationalFunc(a.num() * b.num(), a.den() * b.den());
}

RationalFunc rf_div(const RationalFunc& a, const RationalFunc& b) {
  if (b.is_zero()) throw NumericsError("rf_div: division by the zero function");
  return RationalFunc(a.num() * b.den(), a.den() * b.num());
}

RationalFunc rf_scale(const RationalFunc& a, Scalar c) { return RationalFunc(a.num().scaled(c), a.den()); }

RationalFunc rf_subst_scale(const RationalFunc& a, Scalar c) {
  return RationalFunc(a.num().subst_scale(c), a.den().subst_scale(c));
}

RationalFunc rf_subst_inverse(const RationalFunc& a) {
  return RationalFunc(a.num().subst_inverse(), a.den().subst_inverse());
}

RationalFunc rf_dual_subst(const RationalFunc& a) {
  return rf_subst_inverse(rf_subst_scale(a, 1.0 / static_cast<double>(a.q())));
}

RationalFunc rf_shift_half(const RationalFunc& a) {
  return rf_subst_scale(a, 1.0 / std::sqrt(static_cast<double>(a.q())));
}

std::vector<Scalar> rf_series_coeffs(const RationalFunc& a, int m_lo, int m_hi) {
  if (m_hi < m_lo) return {};
  if (a.is_zero()) return std::vector<Scalar>(m_hi - m_lo + 1, 0.0);
  const LaurentPoly& den = a.den();
  if (den.min_exp() != 0 || std::abs(den.coeff(0)) == 0.0)
    throw NumericsError("rf_series_coeffs: denominator vanishes at X = 0");
  const Scalar d0 = den.coeff(0);
  const int start = std::min(a.num().min_exp(), m_lo);
  std::vector<Scalar> c(m_hi - start + 1, 0.0);
  for (int m = start; m <= m_hi; ++m) {
    Scalar v = a.num().coeff(m);
    for (const auto& [k, dk] : den.coeffs()) {
      if (k == 0 || m - k < start) continue;
      v -= dk * c[m - k - start];
    }
    c[m - start] = v / d0;
  }
  return {c.begin() + (m_lo - start), c.end()};
}

double rf_discrepancy(const RationalFunc& a, const RationalFunc& b) {
  if (a.q() != b.q()) throw NumericsError("rf_discrepancy: mismatched q");
  const double scale = std::max({1.0, a.num().max_abs() * b.den().max_abs(), b.num().max_abs() * a.den().max_abs()});
  return cross_discrepancy(a.num(), a.den(), b.num(), b.den()) / scale;
}

bool rf_equal(const RationalFunc& a, const RationalFunc& b, double tol) {
  return rf_discrepancy(a, b) <= tol;
}

}  // namespace lfactor
