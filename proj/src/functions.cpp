#include "lfactor/functions.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <set>

namespace lfactor {

namespace {

double ppow(int p, int k) { return std::pow(static_cast<double>(p), k); }

// psi(a * p^m * u) for an integer u.
struct TwistPhase {
  bool trivial = true;
  i64 a = 0;
  i64 den = 1;

  TwistPhase(const PRational& twist, int m) {
    if (twist.is_zero()) return;
    const int e = twist.exp() + m;
    if (e >= 0) return;
    trivial = false;
    den = ipow(twist.p(), -e);
    a = mod_floor(twist.num(), den);
  }
  Scalar operator()(i64 u) const { return trivial ? Scalar(1.0) : unit_root(mul_mod(a, u, den), den); }
};

// int over the ball b + p^n Z_p of psi(c x) d^+x
Scalar ball_psi_integral(const PRational& c, const PRational& b, int n, int p) {
  if (!c.is_zero() && c.val() + n < 0) return 0.0;
  return psi_value(c * b) * ppow(p, -n);
}

}  // namespace

// ---------------------------------------------------------------------------
// StepFunction
// ---------------------------------------------------------------------------

StepFunction::StepFunction(int p) : p_(p) {
  if (!is_prime(p)) throw FunctionError("StepFunction: p must be prime");
}

StepFunction& StepFunction::add(Scalar coeff, const PRational& twist, const PRational& center, int rad) {
  if (twist.p() != p_ || center.p() != p_) throw FunctionError("StepFunction: mismatched primes");
  if (coeff == Scalar(0.0)) return *this;
  const PRational b = center.reduce_mod(rad);
  const PRational a = twist.reduce_mod(-rad);
  terms_.push_back({coeff * psi_value((twist - a) * b), a, b, rad});
  return *this;
}

StepFunction StepFunction::ball(int p, const PRational& center, int rad, Scalar coeff) {
  StepFunction f(p);
  f.add(coeff, PRational::zero(p), center, rad);
  return f;
}

Scalar StepFunction::eval(const PRational& x) const {
  Scalar acc = 0.0;
  for (const auto& t : terms_)
    if (x.congruent(t.center, t.rad)) acc += t.coeff * psi_value(t.twist * x);
  return acc;
}

Scalar StepFunction::value_at_zero() const {
  Scalar acc = 0.0;
  for (const auto& t : terms_)
    if (t.center.is_zero()) acc += t.coeff;
  return acc;
}

StepFunction StepFunction::operator+(const StepFunction& o) const {
  if (o.p_ != p_) throw FunctionError("StepFunction: mismatched primes");
  StepFunction out = *this;
  out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
  return out;
}

StepFunction StepFunction::scaled(Scalar c) const {
  StepFunction out(p_);
  for (const auto& t : terms_) out.add(t.coeff * c, t.twist, t.center, t.rad);
  return out;
}

int StepFunction::shell_lo() const {
  if (terms_.empty()) return 0;
  int lo = INT_MAX;
  for (const auto& t : terms_) lo = std::min(lo, t.center.is_zero() ? t.rad : t.center.val());
  return lo;
}

int StepFunction::tail_start() const {
  if (terms_.empty()) return 0;
  int hi = INT_MIN;
  for (const auto& t : terms_) {
    if (t.center.is_zero()) {
      hi = std::max(hi, t.rad);
      if (!t.twist.is_zero()) hi = std::max(hi, -t.twist.val());
    } else {
      hi = std::max(hi, t.center.val() + 1);
    }
  }
  return std::max(hi, shell_lo());
}

StepFunction fourier_transform(const StepFunction& f, bool inverse_psi) {
  StepFunction out(f.p());
  for (const auto& t : f.terms()) {
    const Scalar c = t.coeff * ppow(f.p(), -t.rad) * psi_value(t.twist * t.center);
    if (inverse_psi)
      out.add(c, -t.center, t.twist, -t.rad);
    else
      out.add(c, t.center, -t.twist, -t.rad);
  }
  return out;
}

Scalar l2_inner(const StepFunction& f, const StepFunction& g) {
  if (f.p() != g.p()) throw FunctionError("l2_inner: mismatched primes");
  Scalar acc = 0.0;
  for (const auto& s : f.terms()) {
    for (const auto& t : g.terms()) {
      const StepTerm& small = s.rad >= t.rad ? s : t;
      const StepTerm& big = s.rad >= t.rad ? t : s;
      if (!small.center.congruent(big.center, big.rad)) continue;
      acc += s.coeff * std::conj(t.coeff) * ball_psi_integral(s.twist - t.twist, small.center, small.rad, f.p());
    }
  }
  return acc;
}

double l2_norm2(const StepFunction& f) { return l2_inner(f, f).real(); }

Scalar shell_integral(const StepFunction& f, int m, const MultChar& chi) {
  const int p = f.p();
  if (chi.p() != p) throw FunctionError("shell_integral: mismatched primes");
  const int cond = chi.cond();
  const auto table = chi.unit_table(cond);
  const i64 cmod = ipow(p, cond);
  Scalar total = 0.0;
  for (const auto& t : f.terms()) {
    int low = 0;
    i64 u0 = 0;
    if (t.center.is_zero()) {
      if (m < t.rad) continue;
    } else {
      if (t.center.val() != m) continue;
      low = t.rad - m;
      u0 = t.center.unit_mod(low);
    }
    const TwistPhase phase(t.twist, m);
    const int need_psi = phase.trivial ? 0 : vp(phase.den, p);
    const int n = std::max({cond, low, need_psi, 1});
    const i64 step = ipow(p, low);
    const i64 count = ipow(p, n - low);
    Scalar s = 0.0;
    for (i64 j = 0; j < count; ++j) {
      const i64 u = u0 + step * j;
      if (u % p == 0) continue;
      s += phase(u) * table[u % cmod];
    }
    total += t.coeff * s * ppow(p, -n);
  }
  return total;
}

// ---------------------------------------------------------------------------
// MultStepFunction
// ---------------------------------------------------------------------------

MultStepFunction::MultStepFunction(int p, int level) : p_(p), level_(level) {
  if (!is_prime(p)) throw FunctionError("MultStepFunction: p must be prime");
  if (level < 0) throw FunctionError("MultStepFunction: negative level");
}

MultStepFunction& MultStepFunction::add_value(int m, i64 residue, Scalar value) {
  const i64 mod = ipow(p_, level_);
  const i64 r = mod_floor(residue, mod);
  if (level_ > 0 && r % p_ == 0) throw FunctionError("MultStepFunction: residue is not a unit");
  values_[{m, r}] += value;
  return *this;
}

MultStepFunction& MultStepFunction::add(Scalar coeff, const PAdicElt& rep, int k) {
  if (rep.p != p_) throw FunctionError("MultStepFunction: mismatched primes");
  if (k < 0) throw FunctionError("MultStepFunction: negative coset level");
  if (k > level_) *this = refined(k);
  const i64 base = k == 0 ? 0 : rep.unit_mod(k);
  const i64 step = ipow(p_, k);
  const i64 count = ipow(p_, level_ - k);
  for (i64 j = 0; j < count; ++j) {
    const i64 r = base + step * j;
    if (level_ > 0 && r % p_ == 0) continue;
    add_value(rep.val, r, coeff);
  }
  return *this;
}

MultStepFunction MultStepFunction::coset(int p, const PAdicElt& rep, int k, Scalar coeff) {
  MultStepFunction f(p, k);
  f.add(coeff, rep, k);
  return f;
}

MultStepFunction MultStepFunction::refined(int level) const {
  if (level < level_) throw FunctionError("refined: cannot coarsen");
  if (level == level_) return *this;
  MultStepFunction out(p_, level);
  const i64 step = ipow(p_, level_);
  const i64 count = ipow(p_, level - level_);
  for (const auto& [key, v] : values_) {
    for (i64 j = 0; j < count; ++j) {
      const i64 r = key.second + step * j;
      if (r % p_ == 0) continue;
      out.values_[{key.first, r}] += v;
    }
  }
  return out;
}

Scalar MultStepFunction::value(int m, i64 residue) const {
  const i64 r = mod_floor(residue, ipow(p_, level_));
  auto it = values_.find({m, r});
  return it == values_.end() ? Scalar(0.0) : it->second;
}

Scalar MultStepFunction::eval(const PAdicElt& x) const {
  if (x.p != p_) throw FunctionError("MultStepFunction: mismatched primes");
  return value(x.val, level_ == 0 ? 0 : x.unit_mod(level_));
}

std::vector<std::tuple<Scalar, PAdicElt, int>> MultStepFunction::terms() const {
  std::vector<std::tuple<Scalar, PAdicElt, int>> out;
  const int prec = std::max(level_, 1);
  for (const auto& [key, v] : values_)
    out.emplace_back(v, PAdicElt(p_, key.first, level_ == 0 ? 1 : key.second, prec), level_);
  return out;
}

int MultStepFunction::shell_lo() const {
  if (values_.empty()) return 0;
  return values_.begin()->first.first;
}

int MultStepFunction::shell_hi() const {
  if (values_.empty()) return 0;
  return values_.rbegin()->first.first;
}

double MultStepFunction::l1_norm() const {
  double s = 0.0;
  for (const auto& [key, v] : values_) s += std::abs(v);
  return s * coset_volume(p_, level_);
}

MultStepFunction MultStepFunction::operator+(const MultStepFunction& o) const {
  if (o.p_ != p_) throw FunctionError("MultStepFunction: mismatched primes");
  const int level = std::max(level_, o.level_);
  MultStepFunction out = refined(level);
  for (const auto& [key, v] : o.refined(level).values_) out.values_[key] += v;
  return out;
}

MultStepFunction MultStepFunction::scaled(Scalar c) const {
  MultStepFunction out = *this;
  for (auto& [key, v] : out.values_) v *= c;
  return out;
}

MultStepFunction MultStepFunction::dilated(const PAdicElt& a) const {
  if (a.p != p_) throw FunctionError("dilated: mismatched primes");
  MultStepFunction out(p_, level_);
  const i64 mod = ipow(p_, level_);
  const i64 ua = level_ == 0 ? 0 : a.unit_mod(level_);
  for (const auto& [key, v] : values_) {
    const i64 r = level_ == 0 ? 0 : mul_mod(key.second, ua, mod);
    out.values_[{key.first + a.val, r}] += v;
  }
  return out;
}

MultStepFunction MultStepFunction::inverted() const {
  MultStepFunction out(p_, level_);
  const i64 mod = ipow(p_, level_);
  for (const auto& [key, v] : values_) {
    const i64 r = level_ == 0 ? 0 : inv_mod(key.second, mod);
    out.values_[{-key.first, r}] += v;
  }
  return out;
}

MultStepFunction MultStepFunction::times_char(const MultChar& chi) const {
  if (chi.p() != p_) throw FunctionError("times_char: mismatched primes");
  MultStepFunction out = refined(std::max(level_, chi.cond()));
  const auto table = chi.unit_table(out.level_);
  for (auto& [key, v] : out.values_) v *= std::pow(chi.t(), key.first) * table[key.second];
  return out;
}

MultStepFunction MultStepFunction::times_abs_power(double e) const {
  MultStepFunction out = *this;
  for (auto& [key, v] : out.values_) v *= std::pow(static_cast<double>(p_), -key.first * e);
  return out;
}

MultStepFunction MultStepFunction::cleaned(double tol) const {
  MultStepFunction out(p_, level_);
  for (const auto& [key, v] : values_)
    if (std::abs(v) > tol) out.values_.emplace(key, v);
  return out;
}

StepFunction as_step_function(const MultStepFunction& f) {
  const auto r = f.refined(std::max(f.level(), 1));
  StepFunction out(f.p());
  for (const auto& [key, v] : r.values())
    out.add(v, PRational::zero(f.p()), PRational(f.p(), key.second, key.first), key.first + r.level());
  return out;
}

double max_abs_diff(const MultStepFunction& a, const MultStepFunction& b) {
  if (a.p() != b.p()) throw FunctionError("max_abs_diff: mismatched primes");
  const int level = std::max(a.level(), b.level());
  const auto ra = a.refined(level);
  const auto rb = b.refined(level);
  double mx = 0.0;
  for (const auto& [key, v] : ra.values()) mx = std::max(mx, std::abs(v - rb.value(key.first, key.second)));
  for (const auto& [key, v] : rb.values()) mx = std::max(mx, std::abs(v - ra.value(key.first, key.second)));
  return mx;
}

MultStepFunction mult_convolve(const MultStepFunction& f, const MultStepFunction& g) {
  if (f.p() != g.p()) throw FunctionError("mult_convolve: mismatched primes");
  const int level = std::max(f.level(), g.level());
  const auto rf = f.refined(level);
  const auto rg = g.refined(level);
  const i64 mod = ipow(f.p(), level);
  const double vol = coset_volume(f.p(), level);
  MultStepFunction out(f.p(), level);
  for (const auto& [kf, vf] : rf.values()) {
    for (const auto& [kg, vg] : rg.values()) {
      const i64 r = level == 0 ? 0 : mul_mod(kf.second, kg.second, mod);
      out.add_value(kf.first + kg.first, r, vf * vg * vol);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mellin
// ---------------------------------------------------------------------------

void MellinData::set(const MultChar& omega, const RationalFunc& value) {
  if (omega.p() != p_) throw FunctionError("MellinData: mismatched primes");
  if (value.q() != p_) throw FunctionError("MellinData: component has wrong q");
  comps_.insert_or_assign(omega.unitary(), value);
}

RationalFunc MellinData::component(const MultChar& omega) const {
  auto it = comps_.find(omega);
  if (it == comps_.end()) return RationalFunc::constant(p_, 0.0);
  return it->second;
}

int MellinData::max_conductor() const {
  int c = 0;
  for (const auto& [omega, v] : comps_) c = std::max(c, omega.cond());
  return c;
}

MellinData mellin(const MultStepFunction& f) {
  const int p = f.p();
  const int level = f.level();
  const double vol = coset_volume(p, level);
  const double cut = 1e-13 * std::max(f.l1_norm(), 1e-300);
  MellinData out(p);
  for (const auto& omega : unitary_components(p, level)) {
    const auto table = omega.unit_table(level);
    std::map<int, Scalar> coeffs;
    for (const auto& [key, v] : f.values()) coeffs[key.first] += v * table[key.second] * vol;
    LaurentPoly poly(p, coeffs);
    if (poly.max_abs() <= cut) continue;
    out.set(omega, RationalFunc(poly));
  }
  return out;
}

MultStepFunction mellin_invert(const MellinData& d, int m_lo, int m_hi, int c_max) {
  const int p = d.p();
  if (d.max_conductor() > c_max) throw FunctionError("mellin_invert: component conductor exceeds c_max");
  struct Comp {
    std::vector<Scalar> table;
    std::vector<Scalar> coeffs;
  };
  std::vector<Comp> comps;
  for (const auto& [omega, value] : d.comps()) {
    auto coeffs = rf_series_coeffs(value, m_lo, m_hi);
    comps.push_back({omega.unit_table(c_max), std::move(coeffs)});
  }
  MultStepFunction out(p, c_max);
  const i64 mod = ipow(p, c_max);
  const double norm = 1.0 / (1.0 - 1.0 / p);
  std::vector<std::tuple<int, i64, Scalar>> raw;
  double mx = 0.0;
  for (int m = m_lo; m <= m_hi; ++m) {
    for (i64 r = 0; r < mod; ++r) {
      if (c_max > 0 && r % p == 0) continue;
      Scalar v = 0.0;
      for (const auto& c : comps) v += c.coeffs[m - m_lo] * std::conj(c.table[r]);
      v *= norm;
      mx = std::max(mx, std::abs(v));
      raw.emplace_back(m, r, v);
    }
  }
  for (const auto& [m, r, v] : raw)
    if (std::abs(v) > 1e-14 * mx) out.add_value(m, r, v);
  return out;
}

double mellin_discrepancy(const MellinData& a, const MellinData& b) {
  if (a.p() != b.p()) throw FunctionError("mellin_discrepancy: mismatched primes");
  double mx = 0.0;
  for (const auto& [omega, v] : a.comps()) mx = std::max(mx, rf_discrepancy(v, b.component(omega)));
  for (const auto& [omega, v] : b.comps()) mx = std::max(mx, rf_discrepancy(v, a.component(omega)));
  return mx;
}

}  // namespace lfactor
