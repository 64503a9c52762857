#include "lfactor/characters.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace lfactor {

namespace {

// Generator orders at a level, matching unit_group_generators.
std::vector<i64> orders_at(int p, int level) {
  std::vector<i64> out;
  for (const auto& g : unit_group_generators(p, level)) out.push_back(g.second);
  return out;
}

std::vector<i64> reduce_exps(int p, int level, std::vector<i64> e) {
  const auto ord = orders_at(p, level);
  if (e.size() != ord.size()) throw CharacterError("exponent vector has wrong length for the level");
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = mod_floor(e[i], ord[i]);
  return e;
}

// Exponents at level `from` (already reduced) pushed down to level `to` <= from,
// assuming the character factors through level `to`.
std::vector<i64> descend(int p, int from, int to, const std::vector<i64>& e) {
  if (to == from) return e;
  if (p != 2) {
    if (to == 0) return {};
    return {e[0] / ipow(p, from - to)};
  }
  if (to <= 1) return {};
  if (to == 2) return {e[0]};
  return {e[0], e[1] / ipow(2, from - to)};
}

}  // namespace

int exact_conductor(int p, int level, const std::vector<i64>& exps_in) {
  const auto e = reduce_exps(p, level, exps_in);
  if (p != 2) {
    if (level == 0 || e[0] == 0) return 0;
    return level - std::min(vp(e[0], p), level - 1);
  }
  if (level <= 1) return 0;
  if (level == 2) return e[0] == 0 ? 0 : 2;
  if (e[1] != 0) return level - vp(e[1], 2);
  return e[0] == 0 ? 0 : 2;
}

MultChar::MultChar(int p, int cond, std::vector<i64> exps, Scalar t) : p_(p), cond_(cond), t_(t) {
  if (!is_prime(p)) throw CharacterError("MultChar: p must be prime");
  if (cond < 0) throw CharacterError("MultChar: negative conductor");
  if (p == 2 && cond == 1) throw CharacterError("MultChar: p = 2 admits no character of conductor 1");
  if (!std::isfinite(t.real()) || !std::isfinite(t.imag()) || std::abs(t) == 0.0)
    throw CharacterError("MultChar: t must be finite and nonzero");
  exps_ = reduce_exps(p, cond, std::move(exps));
  if (exact_conductor(p, cond, exps_) != cond)
    throw CharacterError("MultChar: unit character does not have exact conductor " + std::to_string(cond));
}

MultChar MultChar::from_level(int p, int level, std::vector<i64> exps, Scalar t) {
  auto e = reduce_exps(p, level, std::move(exps));
  const int c = exact_conductor(p, level, e);
  return MultChar(p, c, descend(p, level, c, e), t);
}

std::vector<i64> MultChar::exps_at(int level) const {
  if (level < cond_) throw CharacterError("exps_at: level below conductor");
  if (level == cond_) return exps_;
  if (cond_ == 0) return std::vector<i64>(orders_at(p_, level).size(), 0);
  if (p_ != 2) return {exps_[0] * ipow(p_, level - cond_)};
  if (level == 2) return exps_;
  if (cond_ == 2) return {exps_[0], 0};
  return {exps_[0], exps_[1] * ipow(2, level - cond_)};
}

std::pair<i64, i64> MultChar::unit_phase(i64 u) const {
  if (mod_floor(u, p_) == 0) throw CharacterError("unit_phase: argument is not a unit");
  if (cond_ == 0) return {0, 1};
  const auto table = unit_group(p_, cond_);
  const auto k = table->dlog(u);
  const i64 den = table->exponent();
  i64 num = 0;
  for (int i = 0; i < table->ngens(); ++i)
    num = mod_floor(num + mul_mod(exps_[i], k[i], den) * (den / table->generators()[i].second), den);
  return {num, den};
}

Scalar MultChar::unit_value(i64 u) const {
  const auto [n, d] = unit_phase(u);
  return unit_root(n, d);
}

std::vector<Scalar> MultChar::unit_table(int level) const {
  if (level < cond_) throw CharacterError("unit_table: level below conductor");
  const i64 mod = ipow(p_, level);
  std::vector<Scalar> out(static_cast<std::size_t>(mod), 0.0);
  if (cond_ == 0) {
    for (i64 r = 0; r < mod; ++r)
      if (mod == 1 || r % p_ != 0) out[r] = 1.0;
    return out;
  }
  const auto table = unit_group(p_, cond_);
  const i64 cmod = table->modulus();
  std::vector<Scalar> base(static_cast<std::size_t>(cmod), 0.0);
  for (const i64 u : table->units()) base[u] = unit_value(u);
  for (i64 r = 0; r < mod; ++r) out[r] = base[r % cmod];
  return out;
}

bool MultChar::same_unit_part(const MultChar& o) const {
  return p_ == o.p_ && cond_ == o.cond_ && exps_ == o.exps_;
}

Scalar char_eval(const MultChar& chi, const PAdicElt& x) {
  if (x.p != chi.p()) throw CharacterError("char_eval: mismatched primes");
  if (x.prec < chi.cond()) throw CharacterError("char_eval: insufficient precision");
  return std::pow(chi.t(), x.val) * chi.unit_value(x.unit);
}

MultChar char_inverse(const MultChar& chi) {
  std::vector<i64> e = chi.exps();
  for (auto& v : e) v = -v;
  return MultChar(chi.p(), chi.cond(), e, 1.0 / chi.t());
}

MultChar char_product(const MultChar& a, const MultChar& b) {
  if (a.p() != b.p()) throw CharacterError("char_product: mismatched primes");
  const int level = std::max(a.cond(), b.cond());
  auto ea = a.exps_at(level);
  const auto eb = b.exps_at(level);
  for (std::size_t i = 0; i < ea.size(); ++i) ea[i] += eb[i];
  return MultChar::from_level(a.p(), level, ea, a.t() * b.t());
}

std::vector<MultChar> unitary_components(int p, int c_max) {
  if (c_max < 0) throw CharacterError("unitary_components: c_max must be >= 0");
  const auto ord = orders_at(p, c_max);
  std::vector<MultChar> out;
  std::vector<i64> e(ord.size(), 0);
  while (true) {
    out.push_back(MultChar::from_level(p, c_max, e));
    int i = static_cast<int>(e.size()) - 1;
    for (; i >= 0; --i) {
      if (++e[i] < ord[i]) break;
      e[i] = 0;
    }
    if (i < 0) break;
  }
  std::stable_sort(out.begin(), out.end(), UnitPartLess{});
  return out;
}

bool UnitPartLess::operator()(const MultChar& a, const MultChar& b) const {
  if (a.p() != b.p()) return a.p() < b.p();
  if (a.cond() != b.cond()) return a.cond() < b.cond();
  return a.exps() < b.exps();
}

}  // namespace lfactor
