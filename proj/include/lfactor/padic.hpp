#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lfactor/numerics.hpp"

namespace lfactor {

using i64 = std::int64_t;

class PAdicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// p^k as a checked 64-bit integer.
i64 ipow(i64 p, int k);
/// a mod m in [0, m).
i64 mod_floor(i64 a, i64 m);
i64 mul_mod(i64 a, i64 b, i64 m);
i64 inv_mod(i64 a, i64 m);
bool is_prime(i64 n);
/// Largest k with p^k | n (n != 0).
int vp(i64 n, i64 p);

/// Exact element num * p^exp of Z[1/p] (a dense subring of Q_p).
///
/// Used for ball centres and twists, where values are only ever needed
/// modulo a lattice p^k Z_p and Z[1/p] / p^k Z is a complete set of
/// representatives for Q_p / p^k Z_p.
class PRational {
 public:
  PRational() = default;
  PRational(int p, i64 num, int exp = 0);
  static PRational zero(int p) { return PRational(p, 0, 0); }
  /// num / p^k
  static PRational frac(int p, i64 num, int k) { return PRational(p, num, -k); }

  int p() const { return p_; }
  i64 num() const { return num_; }
  int exp() const { return exp_; }
  bool is_zero() const { return num_ == 0; }
  /// v_p; throws on zero.
  int val() const;

  PRational operator+(const PRational& o) const;
  PRational operator-(const PRational& o) const;
  PRational operator-() const;
  PRational operator*(const PRational& o) const;
  bool operator==(const PRational& o) const = default;
  bool operator<(const PRational& o) const;

  /// Canonical representative of x + p^k Z_p: the real number in [0, p^k).
  PRational reduce_mod(int k) const;
  /// v_p(x - c) >= k
  bool congruent(const PRational& c, int k) const;
  /// Residue of x * p^{-val} modulo p^k (x nonzero).
  i64 unit_mod(int k) const;
  double to_double() const;
  std::string to_string() const;

 private:
  void check_p(const PRational& o) const;
  int p_ = 2;
  i64 num_ = 0;
  int exp_ = 0;
};

/// Nonzero x = p^val * unit known modulo p^{val+prec}.
struct PAdicElt {
  int p = 2;
  int val = 0;
  i64 unit = 1;
  int prec = 1;

  PAdicElt() = default;
  PAdicElt(int p, int val, i64 unit, int prec);

  static PAdicElt from_rational(const PRational& x, int prec);
  PRational to_rational() const { return PRational(p, unit, val); }
  i64 unit_mod(int k) const;

  PAdicElt operator*(const PAdicElt& o) const;
  PAdicElt inverse() const;
  bool operator==(const PAdicElt& o) const = default;
};

/// x + y, or nullopt if the sum is zero to the available precision.
std::optional<PAdicElt> padic_add(const PAdicElt& x, const PAdicElt& y);

/// e^{2 pi i r}
Scalar unit_root(i64 num, i64 den);

/// psi(x) = e^{2 pi i frac_p(x)}, the level-0 additive character.
Scalar psi_value(const PAdicElt& x);
Scalar psi_value(const PRational& x);

/// Shell S_m = { |x| = p^{-m} }.
struct Shell {
  int p;
  int m;
};

/// vol(S_m, d^x x) = 1 - 1/p.
double shell_volume(int m, int p);
/// d^x-volume of a coset u(1 + p^k Z_p) (k >= 1) or of Z_p^x (k = 0).
double coset_volume(int p, int k);

/// (Z/p^a)^x with fixed generators and a discrete-log table.
///
/// Odd p: the smallest primitive root g mod p^2, which generates every level.
/// p = 2: no generator for a <= 1, {-1} for a = 2, {-1, 5} for a >= 3.
class UnitGroupTable {
 public:
  UnitGroupTable(int p, int a);
  UnitGroupTable(int p, int a, std::vector<std::pair<i64, i64>> generators);

  int p() const { return p_; }
  int a() const { return a_; }
  i64 modulus() const { return modulus_; }
  i64 order() const { return order_; }
  int ngens() const { return static_cast<int>(generators_.size()); }
  const std::vector<std::pair<i64, i64>>& generators() const { return generators_; }
  /// Exponent of the group: lcm of the generator orders.
  i64 exponent() const { return exponent_; }

  /// Exponent vector of a unit residue (any integer coprime to p).
  std::vector<i64> dlog(i64 u) const;
  i64 exp(const std::vector<i64>& e) const;
  /// All unit residues in increasing order.
  std::vector<i64> units() const;

  /// Recompute every table entry from the generators and check the bijection.
  bool validate() const;

 private:
  void build();

  int p_;
  int a_;
  i64 modulus_;
  i64 order_;
  i64 exponent_ = 1;
  std::vector<std::pair<i64, i64>> generators_;
  std::vector<int> table_;  // ngens entries per residue, -1 for non-units
};

/// Generator list used for (Z/p^a)^x.
std::vector<std::pair<i64, i64>> unit_group_generators(int p, int a);

/// Cached table. Reads LFACTOR_CACHE_DIR (if set) for a JSON disk cache.
std::shared_ptr<const UnitGroupTable> unit_group(int p, int a);

/// Directory used by the disk cache, empty if disabled.
std::string unit_group_cache_dir();

}  // namespace lfactor
