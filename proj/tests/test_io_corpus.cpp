#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "generators.hpp"
#include "lfactor/corpus.hpp"
#include "lfactor/io.hpp"
#include "lfactor/parallel.hpp"

using namespace lfactor;

namespace {

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.code();
  }
  return "";
}

// Exact conductor by enumeration: trivial on 1 + p^c, and (for c > 0) not on 1 + p^{c-1}.
bool has_exact_conductor(const MultChar& chi) {
  const int p = chi.p();
  const int c = chi.cond();
  const i64 mod = ipow(p, c + 1);
  auto trivial_on = [&](int k) {
    const i64 step = ipow(p, k);
    for (i64 u = 1; u < mod; u += step)
      if (u % p != 0 && std::abs(chi.unit_value(u) - 1.0) > 1e-12) return false;
    return true;
  };
  if (!trivial_on(c)) return false;
  return c == 0 || !trivial_on(c - 1);
}

}  // namespace

TEST_CASE("scalars and rational functions round trip") {
  CHECK(scalar_from_json(to_json(Scalar(0.25, -3.0))) == Scalar(0.25, -3.0));
  CHECK(scalar_from_json(Json(2.5)) == Scalar(2.5, 0.0));
  gen::Gen g(60);
  for (int i = 0; i < 30; ++i) {
    const int p = g.prime();
    std::map<int, Scalar> num, den;
    for (int k = 0; k < 3; ++k) num[g.range(-3, 3)] += g.complex();
    den[0] = 1.0;
    den[g.range(1, 3)] = g.complex();
    const RationalFunc r(LaurentPoly(p, num), LaurentPoly(p, den));
    const RationalFunc back = rf_from_json(to_json(r));
    CHECK(rf_discrepancy(r, back) == 0.0);
    CHECK(to_json(back).dump() == to_json(r).dump());
    CHECK(validate(to_json(r), schema("rational_func")).empty());
  }
}

TEST_CASE("characters round trip and keep exact conductors") {
  gen::Gen g(61);
  for (int i = 0; i < 40; ++i) {
    const MultChar chi = g.character(g.prime(), 2);
    const Json j = to_json(chi);
    CHECK(validate(j, schema("character")).empty());
    const MultChar back = char_from_json(j);
    CHECK(back.cond() == chi.cond());
    CHECK(back.exps() == chi.exps());
    CHECK(back.t() == chi.t());
  }
  // exponent 5 on the generator of (Z/25)^x is trivial on 1 + 5Z_5: conductor 1, not 2
  CHECK(error_code([] { char_from_json(Json::parse(R"({"p":5,"cond":2,"unit_char":[5],"t":[1,0]})")); }) ==
        "invalid_character");
  CHECK(error_code([] { char_from_json(Json::parse(R"({"p":5,"cond":1,"unit_char":[1]})")); }) == "schema_violation");
  CHECK(error_code([] { char_from_json(Json::parse(R"({"p":5,"cond":1,"unit_char":[1],"t":[1,0],"x":0})")); }) ==
        "schema_violation");
  CHECK(error_code([] { char_from_json(Json::parse(R"({"p":5,"cond":"1","unit_char":[1],"t":[1,0]})")); }) ==
        "schema_violation");
  CHECK(error_code([] { char_from_json(Json::parse(R"({"p":6,"cond":0,"unit_char":[],"t":[1,0]})")); }) != "");
}

TEST_CASE("functions round trip") {
  gen::Gen g(62);
  for (int i = 0; i < 30; ++i) {
    const int p = g.prime();
    const StepFunction f = g.step(p, 3);
    const Json j = to_json(f);
    CHECK(validate(j, schema("function")).empty());
    const AnyFunction back = function_from_json(j);
    REQUIRE(back.index() == 0);
    const StepFunction& b = std::get<StepFunction>(back);
    for (int k = 0; k < 10; ++k) {
      const PRational x = g.prational(p, 3);
      CHECK(std::abs(b.eval(x) - f.eval(x)) == 0.0);
    }
    CHECK(to_json(b).dump() == j.dump());

    const MultStepFunction m = g.mult(p, g.range(0, 2), -2, 2);
    const AnyFunction mb = function_from_json(to_json(m));
    REQUIRE(mb.index() == 1);
    CHECK(max_abs_diff(std::get<MultStepFunction>(mb), m) == 0.0);
  }
  CHECK(error_code([] { function_from_json(Json::parse(R"({"kind":"wave","p":3,"terms":[]})")); }) ==
        "schema_violation");
  CHECK(error_code([] {
          function_from_json(Json::parse(R"({"kind":"mult","p":3,"level":1,"values":[{"m":0,"r":3,"value":[1,0]}]})"));
        }) != "");
}

TEST_CASE("satake and matrix documents") {
  const SatakeSpec s = satake_from_json(Json::parse(R"({"p":3,"alpha":[[0.6,0.8],[1,0]]})"));
  CHECK(s.p == 3);
  REQUIRE(s.alpha.size() == 2);
  CHECK(s.alpha[0] == Scalar(0.6, 0.8));
  CHECK(satake_from_json(to_json(s)).alpha == s.alpha);

  const MatrixSpec m = matrix_from_json(Json::parse(R"({"p":3,"g":[[[1,-3],0],[0,18]]})"));
  CHECK(m.g[0][0] == PRational(3, 1, -3));
  CHECK(m.g[1][1] == PRational(3, 18));
  CHECK(matrix_from_json(to_json(m)).g == m.g);
  CHECK(error_code([] { matrix_from_json(Json::parse(R"({"p":3,"g":[[1]]})")); }) == "schema_violation");
}

TEST_CASE("schema validator keywords") {
  const Json sch = Json::parse(R"({
    "type": "object", "required": ["a"], "additionalProperties": false,
    "properties": {
      "a": {"type": "integer", "minimum": 0, "maximum": 5},
      "b": {"enum": ["x", "y"]},
      "c": {"type": "array", "minItems": 1, "maxItems": 2, "items": {"$ref": "#/definitions/n"}},
      "d": {"oneOf": [{"type": "string"}, {"type": "number"}]}
    },
    "definitions": {"n": {"type": "number"}}
  })");
  CHECK(validate(Json::parse(R"({"a":3,"b":"x","c":[1.5],"d":"s"})"), sch).empty());
  CHECK_FALSE(validate(Json::parse(R"({"b":"x"})"), sch).empty());
  CHECK_FALSE(validate(Json::parse(R"({"a":6})"), sch).empty());
  CHECK_FALSE(validate(Json::parse(R"({"a":-1})"), sch).empty());
  CHECK_FALSE(validate(Json::parse(R"({"a":1.5})"), sch).empty());
  CHECK_FALSE(validate(Json::parse(R"({"a":1,"b":"z"})"), sch).empty());
  CHECK_FALSE(validate(Json::parse(R"({"a":1,"c":[]})"), sch).empty());
  CHECK_FALSE(validate(Json::parse(R"({"a":1,"c":[1,2,3]})"), sch).empty());
  CHECK_FALSE(validate(Json::parse(R"({"a":1,"c":["no"]})"), sch).empty());
  CHECK_FALSE(validate(Json::parse(R"({"a":1,"d":true})"), sch).empty());
  CHECK_FALSE(validate(Json::parse(R"({"a":1,"e":0})"), sch).empty());
  CHECK_FALSE(validate(Json::parse("[1]"), sch).empty());

  for (const auto& name : schema_names()) CHECK(schema(name).is_object());
  CHECK_THROWS(schema("no_such_schema"));
}

TEST_CASE("load_json reports reason codes") {
  CHECK(load_json(R"( {"a": 1})")["a"] == 1);
  CHECK(load_json("[1,2]").size() == 2);
  CHECK(error_code([] { load_json("{broken"); }) == "json_parse_error");
  CHECK(error_code([] { load_json("/nonexistent/file.json"); }) == "file_not_found");
}

TEST_CASE("shell table csv") {
  const MultStepFunction f = MultStepFunction(3, 1).add_value(-1, 2, Scalar(0.5, -1.0)).add_value(2, 1, 2.0);
  std::istringstream in(shell_table_csv(f));
  std::string line;
  std::getline(in, line);
  CHECK(line == "m,rep,re,im");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
  CHECK(shell_table_csv(f) == shell_table_csv(f));
}

TEST_CASE("corpus generation is deterministic and valid") {
  const CorpusSizes sizes;
  const Json a = corpus_generate(42, sizes);
  const Json b = corpus_generate(42, sizes);
  CHECK(a.dump() == b.dump());
  CHECK(corpus_generate(43, sizes).dump() != a.dump());
  CHECK(validate(a, schema("corpus")).empty());
  CHECK(a["characters"].size() == 20);
  CHECK(a["functions"].size() == 20);
  CHECK(a["satake"].size() == 10);

  CorpusSizes twice = sizes;
  twice.characters *= 2;
  twice.functions *= 2;
  twice.satake *= 2;
  const Json c = corpus_generate(7, twice);
  CHECK(c["characters"].size() == 40);
  CHECK(c["functions"].size() == 40);
  CHECK(c["satake"].size() == 20);

  for (const auto& j : c["characters"]) {
    const MultChar chi = char_from_json(j);
    CHECK(chi.cond() <= 2);
    CHECK(has_exact_conductor(chi));
  }
  for (const auto& j : c["functions"]) CHECK_NOTHROW(function_from_json(j));
  for (const auto& j : c["satake"]) CHECK_NOTHROW(satake_from_json(j));
}

TEST_CASE("functional equation corpus") {
  const auto a = fe_corpus(42, 50);
  const auto b = fe_corpus(42, 50);
  REQUIRE(a.size() == 50);
  int step = 0, ramified = 0, unramified = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(to_json(a[i]).dump() == to_json(b[i]).dump());
    CHECK(validate(Json::array({to_json(a[i])}), schema("fe_corpus")).empty());
    step += a[i].f.index() == 0 ? 1 : 0;
    (a[i].chi.is_ramified() ? ramified : unramified) += 1;
    CHECK(has_exact_conductor(a[i].chi));
    CHECK(has_exact_conductor(a[i].pi));
  }
  CHECK(step == 25);
  CHECK(ramified > 0);
  CHECK(unramified > 0);
}

TEST_CASE("parallel_for") {
  std::vector<int> out(1000, 0);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i * i % 97); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i % 97));

  std::atomic<int> count{0};
  parallel_for(0, [&](std::size_t) { ++count; });
  CHECK(count == 0);

  CHECK_THROWS_WITH_AS(parallel_for(50, [](std::size_t i) {
                         if (i == 17) throw std::runtime_error("boom");
                       }),
                       "boom", std::runtime_error);
  CHECK(worker_count() >= 1);
}
