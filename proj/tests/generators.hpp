// Hand-rolled generators for property tests. Independent of the library's
// corpus module so the properties are not exercised only on its output.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lfactor/characters.hpp"
#include "lfactor/functions.hpp"
#include "lfactor/numerics.hpp"

namespace gen {

using lfactor::i64;
using lfactor::Scalar;

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  i64 below(i64 n) { return std::uniform_int_distribution<i64>(0, n - 1)(rng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  Scalar complex(double r = 1.0) { return {real(-r, r), real(-r, r)}; }
  Scalar unit() { return std::polar(1.0, real(0.0, 2.0 * M_PI)); }
  int prime() {
    static const int ps[] = {2, 3, 5, 7};
    return ps[range(0, 3)];
  }
  i64 unit_residue(int p, int k) {
    const i64 mod = lfactor::ipow(p, k);
    while (true) {
      const i64 u = below(mod);
      if (mod == 1 || u % p != 0) return mod == 1 ? 1 : u;
    }
  }

  lfactor::MultChar character(int p, int max_cond, bool unitary = false) {
    int level = range(0, max_cond);
    if (p == 2 && level == 1) level = 2;
    std::vector<i64> e;
    for (const auto& g : lfactor::unit_group_generators(p, level)) e.push_back(below(g.second));
    return lfactor::MultChar::from_level(p, level, e, unitary ? Scalar(1.0) : unit() * real(0.5, 1.5));
  }

  lfactor::PRational prational(int p, int max_den_exp, int max_num_exp = 3) {
    return lfactor::PRational(p, below(lfactor::ipow(p, max_num_exp + max_den_exp)), -max_den_exp);
  }

  lfactor::StepFunction step(int p, int terms = 3) {
    lfactor::StepFunction f(p);
    for (int i = 0; i < terms; ++i)
      f.add(complex(), prational(p, range(0, 2)), prational(p, range(0, 2)), range(-2, 2));
    return f;
  }

  lfactor::MultStepFunction mult(int p, int level, int m_lo, int m_hi, int cosets = 4) {
    lfactor::MultStepFunction f(p, level);
    for (int i = 0; i < cosets; ++i)
      f.add_value(range(m_lo, m_hi), level == 0 ? 0 : unit_residue(p, level), complex());
    return f;
  }

  lfactor::LaurentPoly poly(int q, int lo, int hi) {
    std::map<int, Scalar> c;
    for (int e = lo; e <= hi; ++e) c[e] = complex();
    return lfactor::LaurentPoly(q, c);
  }

  /// Random rational function with a denominator of the given degree whose
  /// roots stay away from the unit circle of X.
  lfactor::RationalFunc rf(int q, int num_deg, int den_deg) {
    lfactor::LaurentPoly d = lfactor::LaurentPoly::constant(q, 1.0);
    for (int i = 0; i < den_deg; ++i) d = d * lfactor::LaurentPoly(q, {{0, 1.0}, {1, -unit() * real(0.2, 0.8)}});
    return lfactor::RationalFunc(poly(q, range(-2, 0), num_deg), d);
  }
};

}  // namespace gen
