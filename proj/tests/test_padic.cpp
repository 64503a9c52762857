#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include <json.hpp>

#include "generators.hpp"
#include "lfactor/padic.hpp"

using namespace lfactor;

namespace {

bool close(Scalar a, Scalar b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

Scalar e2pi(double r) { return std::polar(1.0, 2.0 * std::numbers::pi * r); }

// Order of u in (Z/m)^x by repeated multiplication.
i64 brute_order(i64 u, i64 m) {
  i64 x = u % m, k = 1;
  while (x != 1 % m) {
    x = x * u % m;
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("integer helpers") {
  CHECK(ipow(3, 4) == 81);
  CHECK(mod_floor(-7, 5) == 3);
  CHECK(mul_mod(123456789, 987654321, 1000000007) == 123456789LL * 987654321LL % 1000000007LL);
  CHECK(inv_mod(3, 7) == 5);
  CHECK_THROWS_AS(inv_mod(3, 9), PAdicError);
  CHECK(is_prime(7));
  CHECK_FALSE(is_prime(9));
  CHECK(vp(72, 2) == 3);
  CHECK_THROWS_AS(ipow(2, -1), PAdicError);
}

TEST_CASE("prational reduction and valuation") {
  const PRational x = PRational::frac(3, 22, 2);  // 22/9
  CHECK(x.val() == -2);
  CHECK(x.reduce_mod(0) == PRational::frac(3, 4, 2));
  CHECK(x.congruent(PRational::frac(3, 4, 2), 0));
  CHECK_FALSE(x.congruent(PRational::frac(3, 1, 2), 0));
  CHECK(PRational(5, 50).val() == 2);
  CHECK(PRational(5, 50).unit_mod(1) == 2);
  CHECK_THROWS_AS(PRational::zero(5).val(), PAdicError);
  CHECK_THROWS_AS(PRational(3, 1) + PRational(5, 1), PAdicError);
}

TEST_CASE("padic element invariants") {
  const PAdicElt x(5, -1, 7, 2);
  CHECK(x.unit == 7);
  CHECK(PAdicElt(5, 0, -1, 2).unit == 24);
  CHECK_THROWS_AS(PAdicElt(5, 0, 10, 2), PAdicError);
  CHECK_THROWS_AS(PAdicElt(6, 0, 1, 2), PAdicError);
  CHECK_THROWS_AS(PAdicElt(5, 0, 1, 0), PAdicError);
  const PAdicElt y = x * x.inverse();
  CHECK(y.val == 0);
  CHECK(y.unit == 1);
  const PAdicElt r = PAdicElt::from_rational(PRational::frac(3, 22, 2), 3);
  CHECK(r.val == -2);
  CHECK(r.unit == 22);
}

TEST_CASE("psi examples") {
  CHECK(psi_value(PAdicElt(7, 0, 3, 2)) == Scalar(1.0));
  CHECK(psi_value(PAdicElt(7, 4, 3, 2)) == Scalar(1.0));
  for (const int p : {2, 3, 5, 7}) CHECK(close(psi_value(PAdicElt(p, -1, 1, 1)), e2pi(1.0 / p)));
  CHECK(close(psi_value(PAdicElt(3, -2, 4, 2)), e2pi(4.0 / 9.0)));
  CHECK(close(psi_value(PRational::frac(3, 4, 2)), e2pi(4.0 / 9.0)));
  CHECK_THROWS_AS(psi_value(PAdicElt(3, -3, 1, 2)), PAdicError);
}

TEST_CASE("psi is nontrivial on p^{-1} Z_p") {
  for (const int p : {2, 3, 5, 7}) {
    Scalar s = 0.0;
    for (i64 u = 1; u < p; ++u) s += psi_value(PAdicElt(p, -1, u, 1));
    CHECK(close(s, -1.0));
    // Integral over S_{-1}: each residue class carries d^x volume 1/p.
    CHECK(close(s * coset_volume(p, 1), -1.0 / p));
  }
}

TEST_CASE("shell volumes") {
  CHECK(shell_volume(0, 5) == doctest::Approx(4.0 / 5.0));
  CHECK(shell_volume(7, 3) == doctest::Approx(2.0 / 3.0));
  CHECK(shell_volume(-2, 2) == doctest::Approx(0.5));
  for (const int p : {2, 3, 5, 7})
    for (int k = 1; k <= 3; ++k)
      CHECK(coset_volume(p, k) * static_cast<double>(unit_group(p, k)->order()) == doctest::Approx(shell_volume(0, p)));
}

TEST_CASE("unit group examples") {
  const auto g51 = unit_group(5, 1);
  REQUIRE(g51->ngens() == 1);
  CHECK(g51->generators()[0] == std::make_pair<i64, i64>(2, 4));

  const auto g23 = unit_group(2, 3);
  REQUIRE(g23->ngens() == 2);
  CHECK(g23->generators()[0] == std::make_pair<i64, i64>(7, 2));
  CHECK(g23->generators()[1] == std::make_pair<i64, i64>(5, 2));

  const auto g32 = unit_group(3, 2);
  REQUIRE(g32->ngens() == 1);
  CHECK(g32->generators()[0] == std::make_pair<i64, i64>(2, 6));

  CHECK(unit_group(2, 1)->order() == 1);
  CHECK(unit_group(7, 0)->order() == 1);
  CHECK_THROWS_AS(unit_group(6, 1), PAdicError);
  CHECK_THROWS_AS(g51->dlog(10), PAdicError);
}

TEST_CASE("unit groups against a brute-force oracle") {
  for (const int p : {2, 3, 5, 7}) {
    for (int a = 1; a <= (p == 2 ? 6 : 4); ++a) {
      const auto t = unit_group(p, a);
      const i64 mod = ipow(p, a);
      i64 phi = 0;
      for (i64 u = 1; u < mod; ++u) phi += (u % p != 0);
      CHECK(t->order() == phi);
      i64 prod = 1;
      for (const auto& [g, ord] : t->generators()) {
        CHECK(brute_order(g, mod) == ord);
        prod *= ord;
      }
      CHECK(prod == phi);
      CHECK(t->validate());
      // Every residue is reached exactly once from the exponent box.
      std::set<i64> seen;
      for (const i64 u : t->units()) {
        CHECK(t->exp(t->dlog(u)) == u);
        seen.insert(t->exp(t->dlog(u)));
      }
      CHECK(static_cast<i64>(seen.size()) == phi);
    }
  }
}

TEST_CASE("property: dlog inverts exp on the exponent box") {
  gen::Gen g(5);
  for (int i = 0; i < 300; ++i) {
    const int p = g.prime();
    const int a = g.range(1, 4);
    const auto t = unit_group(p, a);
    std::vector<i64> e;
    for (const auto& gen : t->generators()) e.push_back(g.below(gen.second));
    CHECK(t->dlog(t->exp(e)) == e);
  }
}

TEST_CASE("property: psi is additive") {
  gen::Gen g(6);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const int p = g.prime();
    const PAdicElt x(p, g.range(-3, 2), g.unit_residue(p, 4), 4);
    const PAdicElt y(p, g.range(-3, 2), g.unit_residue(p, 4), 4);
    const auto s = padic_add(x, y);
    if (!s) continue;
    if (s->val + s->prec < 0 || s->prec < -s->val) continue;
    CHECK(close(psi_value(*s), psi_value(x) * psi_value(y)));
    ++checked;
  }
  CHECK(checked > 300);
}

TEST_CASE("property: prational and padic psi agree") {
  gen::Gen g(7);
  for (int i = 0; i < 200; ++i) {
    const int p = g.prime();
    const PRational x(p, static_cast<i64>(g.unit_residue(p, 5)), g.range(-4, 2));
    CHECK(close(psi_value(x), psi_value(PAdicElt::from_rational(x, 5))));
    const PRational y(p, static_cast<i64>(g.unit_residue(p, 5)), g.range(-4, 2));
    CHECK(close(psi_value(x + y), psi_value(x) * psi_value(y)));
  }
}

TEST_CASE("disk cache round trip") {
  const std::string dir = unit_group_cache_dir();
  if (dir.empty()) return;
  const auto t = unit_group(7, 3);
  const auto path = std::filesystem::path(dir) / "unit_group_p7_a3.json";
  REQUIRE(std::filesystem::exists(path));
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j.at("p") == 7);
  CHECK(j.at("a") == 3);
  CHECK(static_cast<i64>(j.at("dlog").size()) == t->order());
  const UnitGroupTable rebuilt(7, 3);
  for (const i64 u : rebuilt.units()) CHECK(t->dlog(u) == rebuilt.dlog(u));
}
