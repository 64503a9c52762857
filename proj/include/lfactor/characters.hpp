#pragma once

#include <vector>

#include "lfactor/padic.hpp"

namespace lfactor {

class CharacterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quasi-character chi of Q_p^x: chi(p^m u) = t^m * unit_char(u mod p^cond).
///
/// unit_char is an exponent vector e against the generators of
/// unit_group(p, cond): chi(g_i) = exp(2 pi i e_i / ord(g_i)).
class MultChar {
 public:
  MultChar() = default;
  /// Validating constructor: cond must be the exact conductor of exps.
  MultChar(int p, int cond, std::vector<i64> exps, Scalar t = 1.0);

  static MultChar trivial(int p) { return MultChar(p, 0, {}, 1.0); }
  static MultChar unramified(int p, Scalar t) { return MultChar(p, 0, {}, t); }
  /// Character given by exponents at some level >= its conductor; the
  /// conductor is recomputed.
  static MultChar from_level(int p, int level, std::vector<i64> exps, Scalar t = 1.0);

  int p() const { return p_; }
  int cond() const { return cond_; }
  const std::vector<i64>& exps() const { return exps_; }
  Scalar t() const { return t_; }
  bool is_ramified() const { return cond_ > 0; }
  MultChar with_t(Scalar t) const { return MultChar(p_, cond_, exps_, t); }
  MultChar unitary() const { return with_t(1.0); }

  /// Exponent vector of the same unit character at a level >= cond.
  std::vector<i64> exps_at(int level) const;
  /// unit_char(u) = exp(2 pi i num / den); u coprime to p.
  std::pair<i64, i64> unit_phase(i64 u) const;
  Scalar unit_value(i64 u) const;
  /// Values of unit_char on residues mod p^level (zero on non-units).
  std::vector<Scalar> unit_table(int level) const;

  /// Same p, conductor and unit part (t ignored).
  bool same_unit_part(const MultChar& o) const;

 private:
  int p_ = 2;
  int cond_ = 0;
  std::vector<i64> exps_;
  Scalar t_ = 1.0;
};

/// Exact conductor of a unit character given at some level.
int exact_conductor(int p, int level, const std::vector<i64>& exps);

Scalar char_eval(const MultChar& chi, const PAdicElt& x);
MultChar char_inverse(const MultChar& chi);
MultChar char_product(const MultChar& a, const MultChar& b);

/// Every character of (Z/p^c_max)^x with t = 1, tagged with exact conductor,
/// ordered by (cond, exps).
std::vector<MultChar> unitary_components(int p, int c_max);

/// Ordering on unit parts, used to key Mellin components.
struct UnitPartLess {
  bool operator()(const MultChar& a, const MultChar& b) const;
};

}  // namespace lfactor
