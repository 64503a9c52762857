#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "lfactor/zeta_gamma.hpp"

using namespace lfactor;

namespace {

bool close(Scalar a, Scalar b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// int_{S_m} psi(x) omega_0(x) d^x x by summing over units mod p^N.
Scalar brute_shell(int m, const MultChar& w, int N) {
  const int p = w.p();
  const i64 mod = ipow(p, N);
  Scalar s = 0.0;
  for (i64 u = 1; u < mod; ++u) {
    if (u % p == 0) continue;
    s += psi_value(PRational(p, u, m)) * (w.cond() == 0 ? Scalar(1.0) : w.unit_value(u));
  }
  return s / static_cast<double>(mod);
}

std::vector<MultChar> small_characters(int p, int c_max) {
  std::vector<MultChar> out;
  for (const auto& w : unitary_components(p, c_max)) out.push_back(w);
  return out;
}

}  // namespace

TEST_CASE("zeta examples") {
  for (const int p : {2, 3, 5, 7}) {
    const double q = p;
    const MultChar triv = MultChar::trivial(p);
    const MultStepFunction units = MultStepFunction(p, 0).add_value(0, 0, 1.0);
    CHECK(rf_discrepancy(zeta(units, triv), RationalFunc::constant(p, 1.0 - 1.0 / q)) < 1e-14);

    const StepFunction zp = StepFunction::ball(p, PRational::zero(p), 0);
    const RationalFunc expect(LaurentPoly::constant(p, 1.0 - 1.0 / q), LaurentPoly(p, {{0, 1.0}, {1, -std::sqrt(q)}}));
    CHECK(rf_discrepancy(zeta(zp, triv), expect) < 1e-14);

    const MultStepFunction one_plus = MultStepFunction::coset(p, PAdicElt(p, 0, 1, 1), 1);
    for (const auto& chi : small_characters(p, 1))
      CHECK(rf_discrepancy(zeta(one_plus, chi.with_t(Scalar(0.3, 0.4))), RationalFunc::constant(p, (1.0 - 1.0 / q) / (q - 1))) < 1e-14);
  }
}

TEST_CASE("local factor examples") {
  const int p = 5;
  CHECK(rf_discrepancy(l_factor(MultChar::trivial(p)), RationalFunc::inverse_product(p, {1.0})) < 1e-15);
  CHECK(rf_discrepancy(l_factor(MultChar(p, 1, {1}, 0.7)), RationalFunc::constant(p, 1.0)) < 1e-15);
  const Scalar a1(0.5, 0.1), a2(-0.2, 0.9);
  const RationalFunc expect(LaurentPoly::constant(p, 1.0), LaurentPoly(p, {{0, 1.0}, {1, -(a1 + a2)}, {2, a1 * a2}}));
  CHECK(rf_discrepancy(l_factor_satake(p, {a1, a2}), expect) < 1e-15);
}

TEST_CASE("epsilon examples") {
  CHECK(rf_discrepancy(epsilon_factor(MultChar::unramified(7, Scalar(0.2, 0.3))), RationalFunc::constant(7, 1.0)) < 1e-15);

  for (const int p : {3, 5, 7}) {
    const MultChar quad(p, 1, {(p - 1) / 2});  // the generator goes to -1
    Scalar g = 0.0;
    for (i64 u = 1; u < p; ++u) g += quad.unit_value(u) * std::polar(1.0, 2.0 * M_PI * u / p);
    CHECK(std::abs(g) == doctest::Approx(std::sqrt(p)));
    CHECK(close(gauss_sum(quad), g));
    for (const double t : {-3.0, 0.0, 1.7}) CHECK(std::abs(epsilon_factor(quad).eval_s(Scalar(0.5, t))) == doctest::Approx(1.0));
  }

  const MultChar c2(3, 2, {1});
  const RationalFunc e = epsilon_factor(c2);
  CHECK(e.is_laurent());
  REQUIRE(e.num().coeffs().size() == 1);
  CHECK(e.num().min_exp() == 2);
}

TEST_CASE("gamma examples") {
  for (const int p : {2, 3, 5, 7}) {
    const double q = p;
    const RationalFunc expect(LaurentPoly(p, {{0, 1.0}, {1, -1.0}}), LaurentPoly(p, {{-1, -1.0 / q}, {0, 1.0}}));
    CHECK(rf_discrepancy(gamma_closed(MultChar::trivial(p)), expect) < 1e-14);
  }
  const MultChar r(5, 2, {3}, Scalar(0.8, 0.6));
  CHECK(rf_discrepancy(gamma_closed(r), epsilon_factor(r)) < 1e-14);
  CHECK(gamma_closed(r).is_laurent());
}

TEST_CASE("principal value shell sum for trivial data") {
  // Shells m >= 0 give sum (1 - 1/q) Y^m, the shell m = -1 gives -Y^{-1}/q, Y = q^{-1/2} X^{-1}.
  for (const int p : {2, 3, 5, 7}) {
    const double rq = std::sqrt(static_cast<double>(p));
    const GammaReport rep = gamma_pv(MultChar::trivial(p), MultChar::trivial(p));
    const RationalFunc hand(LaurentPoly(p, {{0, 1.0}, {1, -1.0 / rq}}), LaurentPoly(p, {{-1, -1.0 / rq}, {0, 1.0}}));
    CHECK(rf_discrepancy(rep.gamma_pv, hand) < 1e-13);
    CHECK(rep.max_coeff_diff < 1e-13);
    CHECK(rep.shell_lo == -1);
    CHECK(rep.shell_hi == -1);
  }
}

TEST_CASE("shell integrals vanish off the conductor shell") {
  for (const int p : {3, 5}) {
    for (const auto& w : small_characters(p, 2)) {
      const int a = w.cond();
      if (a == 0) continue;
      for (int m = -a - 2; m <= 1; ++m) {
        const Scalar brute = brute_shell(m, w, std::max({a, -m, 1}));
        CHECK(close(shell_psi_integral(m, w), brute, 1e-13));
        if (m != -a) CHECK(std::abs(brute) < 1e-13);
      }
      CHECK(std::abs(brute_shell(-a, w, a)) > 1e-3);
    }
  }
}

TEST_CASE("property: closed and principal value gammas agree") {
  gen::Gen g(20);
  for (const int p : {2, 3, 5, 7}) {
    for (const auto& w : small_characters(p, 2)) {
      for (int j = 0; j < 3; ++j) {
        const MultChar chi = w.with_t(g.unit());
        const MultChar pi = g.character(p, 1, false);
        const GammaReport rep = gamma_pv(pi, chi);
        CHECK(rep.max_coeff_diff <= 1e-9);
        CHECK(rf_discrepancy(rep.gamma_pv, rf_shift_half(gamma_closed(char_product(pi, chi)))) <= 1e-9);
      }
    }
  }
}

TEST_CASE("property: principal value is unchanged by deeper truncation") {
  gen::Gen g(21);
  for (int i = 0; i < 40; ++i) {
    const int p = g.prime();
    const MultChar chi = g.character(p, 2);
    const MultChar pi = MultChar::trivial(p);
    const GammaReport base = gamma_pv(pi, chi);
    const int depth = std::max(chi.cond(), 1);
    for (const int extra : {1, 2}) CHECK(rf_discrepancy(gamma_pv(pi, chi, depth + extra).gamma_pv, base.gamma_pv) < 1e-12);
  }
}

TEST_CASE("property: unitarity on the critical line") {
  gen::Gen g(22);
  for (int i = 0; i < 60; ++i) {
    const int p = g.prime();
    const MultChar chi = g.character(p, 2, true).with_t(g.unit());
    const RationalFunc gm = gamma_closed(chi);
    for (int j = 0; j < 20; ++j) {
      const double t = g.real(-20.0, 20.0);
      CHECK(std::abs(gm.eval_s(Scalar(0.5, t))) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("property: duality of gamma factors") {
  gen::Gen g(23);
  for (int i = 0; i < 80; ++i) {
    const int p = g.prime();
    const MultChar chi = g.character(p, 2);
    const RationalFunc prod = rf_mul(gamma_closed(chi), rf_dual_subst(gamma_closed(char_inverse(chi), true)));
    CHECK(rf_discrepancy(prod, RationalFunc::constant(p, 1.0)) < 1e-12);
  }
}

TEST_CASE("functional equation examples") {
  for (const int p : {2, 3, 5, 7}) {
    const MultChar triv = MultChar::trivial(p);
    const FeReport rep = verify_fe(StepFunction::ball(p, PRational::zero(p), 0), triv, triv);
    CHECK(rep.discrepancy <= 1e-10);
  }
  // Compactly supported phi with ramified chi: both sides are Laurent polynomials.
  const MultStepFunction phi = MultStepFunction(5, 1).add_value(-1, 2, 1.0).add_value(1, 3, Scalar(0.0, 2.0));
  const MultChar chi(5, 1, {1}, Scalar(0.6, 0.8));
  const FeReport rep = verify_fe(phi, chi, MultChar::trivial(5));
  CHECK(rep.rhs.is_laurent());
  CHECK(rep.discrepancy <= 1e-10);
}

TEST_CASE("property: functional equation on random data") {
  gen::Gen g(24);
  for (int i = 0; i < 60; ++i) {
    const int p = g.prime();
    const MultChar chi = g.character(p, 2);
    const MultChar pi = g.character(p, 2);
    if (i % 2 == 0) {
      CHECK(verify_fe(g.step(p, 3), chi, pi).discrepancy <= 1e-9);
    } else {
      const int level = std::max({chi.cond(), pi.cond(), g.range(0, 2)});
      CHECK(verify_fe(g.mult(p, level, -2, 2), chi, pi).discrepancy <= 1e-9);
    }
  }
}
