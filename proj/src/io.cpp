#include "lfactor/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "lfactor_schemas.hpp"

namespace lfactor {

namespace {

std::string type_of(const Json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

bool type_matches(const Json& j, const std::string& t) {
  if (t == "number") return j.is_number();
  if (t == "integer") return j.is_number_integer();
  return type_of(j) == t;
}

const Json& resolve(const Json& root, const Json& s) {
  if (!s.is_object() || !s.contains("$ref")) return s;
  const std::string ref = s["$ref"].get<std::string>();
  if (ref.rfind("#/", 0) != 0) throw std::logic_error("schema: only local $ref is supported: " + ref);
  return root.at(Json::json_pointer(ref.substr(1)));
}

void check(const Json& doc, const Json& sch, const Json& root, const std::string& path,
           std::vector<std::string>& errs) {
  const Json& s = resolve(root, sch);
  auto fail = [&](const std::string& msg) { errs.push_back((path.empty() ? "/" : path) + ": " + msg); };
  if (s.contains("type")) {
    const Json& t = s["type"];
    bool ok = false;
    if (t.is_array()) {
      for (const auto& x : t) ok = ok || type_matches(doc, x.get<std::string>());
    } else {
      ok = type_matches(doc, t.get<std::string>());
    }
    if (!ok) {
      fail("expected type " + t.dump() + ", got " + type_of(doc));
      return;
    }
  }
  if (s.contains("const") && doc != s["const"]) fail("expected " + s["const"].dump());
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& x : s["enum"]) found = found || doc == x;
    if (!found) fail("value not in " + s["enum"].dump());
  }
  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (s.contains("minimum") && v < s["minimum"].get<double>()) fail("below minimum " + s["minimum"].dump());
    if (s.contains("maximum") && v > s["maximum"].get<double>()) fail("above maximum " + s["maximum"].dump());
  }
  if (doc.is_object()) {
    if (s.contains("required"))
      for (const auto& k : s["required"])
        if (!doc.contains(k.get<std::string>())) fail("missing required property " + k.dump());
    const Json props = s.value("properties", Json::object());
    for (const auto& [k, v] : doc.items()) {
      if (props.contains(k)) check(v, props[k], root, path + "/" + k, errs);
      else if (s.contains("additionalProperties") && s["additionalProperties"] == false)
        fail("unexpected property \"" + k + "\"");
    }
  }
  if (doc.is_array()) {
    if (s.contains("minItems") && doc.size() < s["minItems"].get<std::size_t>())
      fail("fewer than " + s["minItems"].dump() + " items");
    if (s.contains("maxItems") && doc.size() > s["maxItems"].get<std::size_t>())
      fail("more than " + s["maxItems"].dump() + " items");
    if (s.contains("items"))
      for (std::size_t i = 0; i < doc.size(); ++i) check(doc[i], s["items"], root, path + "/" + std::to_string(i), errs);
  }
  if (s.contains("oneOf")) {
    int matched = 0;
    for (const auto& alt : s["oneOf"]) {
      std::vector<std::string> sub;
      check(doc, alt, root, path, sub);
      if (sub.empty()) ++matched;
    }
    if (matched != 1) fail("matches " + std::to_string(matched) + " alternatives of oneOf (need exactly 1)");
  }
}

template <class F>
auto guarded(const std::string& code, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const Json::exception& e) {
    throw InputError(code, e.what());
  } catch (const std::exception& e) {
    throw InputError(code, e.what());
  }
}

PRational prational_from_json(int p, const Json& j) {
  if (j.is_number_integer()) return PRational(p, j.get<i64>(), 0);
  return PRational(p, j.at(0).get<i64>(), j.at(1).get<int>());
}

Json to_json(const PRational& x) { return Json::array({x.num(), x.exp()}); }

Json poly_json(const LaurentPoly& p) {
  Json out = Json::array();
  for (const auto& [e, c] : p.coeffs()) out.push_back({e, c.real(), c.imag()});
  return out;
}

LaurentPoly poly_from_json(int q, const Json& j) {
  std::map<int, Scalar> m;
  for (const auto& t : j) m[t.at(0).get<int>()] += Scalar(t.at(1).get<double>(), t.at(2).get<double>());
  return LaurentPoly(q, m);
}

}  // namespace

const Json& schema(const std::string& name) {
  static const std::map<std::string, Json> parsed = [] {
    std::map<std::string, Json> out;
    for (const auto& [k, v] : detail::kEmbeddedSchemas) out[k] = Json::parse(v);
    return out;
  }();
  const auto it = parsed.find(name);
  if (it == parsed.end()) throw std::logic_error("unknown schema " + name);
  return it->second;
}

std::vector<std::string> schema_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::kEmbeddedSchemas) out.push_back(k);
  return out;
}

std::vector<std::string> validate(const Json& doc, const Json& sch) {
  std::vector<std::string> errs;
  check(doc, sch, sch, "", errs);
  return errs;
}

void require_valid(const Json& doc, const std::string& schema_name) {
  const auto errs = validate(doc, schema(schema_name));
  if (errs.empty()) return;
  std::string msg = "input does not match schema " + schema_name + ":";
  for (std::size_t i = 0; i < errs.size() && i < 5; ++i) msg += " " + errs[i] + ";";
  throw InputError("schema_violation", msg);
}

Json load_json(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    try {
      return Json::parse(arg);
    } catch (const Json::parse_error& e) {
      throw InputError("json_parse_error", e.what());
    }
  }
  std::ifstream in(arg);
  if (!in) throw InputError("file_not_found", "cannot open " + arg);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("json_parse_error", arg + ": " + e.what());
  }
}

Json to_json(Scalar z) { return Json::array({z.real(), z.imag()}); }

Scalar scalar_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json to_json(const RationalFunc& r) { return {{"q", r.q()}, {"num", poly_json(r.num())}, {"den", poly_json(r.den())}}; }

RationalFunc rf_from_json(const Json& j) {
  require_valid(j, "rational_func");
  return guarded("invalid_rational_function", [&] {
    const int q = j.at("q").get<int>();
    return RationalFunc(poly_from_json(q, j.at("num")), poly_from_json(q, j.at("den")));
  });
}

Json to_json(const MultChar& chi) {
  return {{"p", chi.p()}, {"cond", chi.cond()}, {"unit_char", chi.exps()}, {"t", to_json(chi.t())}};
}

MultChar char_from_json(const Json& j) {
  require_valid(j, "character");
  return guarded("invalid_character", [&] {
    return MultChar(j.at("p").get<int>(), j.at("cond").get<int>(), j.at("unit_char").get<std::vector<i64>>(),
                    scalar_from_json(j.at("t")));
  });
}

Json to_json(const StepFunction& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms())
    terms.push_back(
        {{"coeff", to_json(t.coeff)}, {"twist", to_json(t.twist)}, {"center", to_json(t.center)}, {"rad", t.rad}});
  return {{"kind", "step"}, {"p", f.p()}, {"terms", terms}};
}

Json to_json(const MultStepFunction& f) {
  Json vals = Json::array();
  for (const auto& [k, v] : f.values()) vals.push_back({{"m", k.first}, {"r", k.second}, {"value", to_json(v)}});
  return {{"kind", "mult"}, {"p", f.p()}, {"level", f.level()}, {"values", vals}};
}

AnyFunction function_from_json(const Json& j) {
  require_valid(j, "function");
  return guarded("invalid_function", [&]() -> AnyFunction {
    const int p = j.at("p").get<int>();
    if (j.at("kind") == "step") {
      StepFunction f(p);
      for (const auto& t : j.at("terms"))
        f.add(scalar_from_json(t.at("coeff")), prational_from_json(p, t.at("twist")),
              prational_from_json(p, t.at("center")), t.at("rad").get<int>());
      return f;
    }
    MultStepFunction f(p, j.at("level").get<int>());
    for (const auto& v : j.at("values")) f.add_value(v.at("m").get<int>(), v.at("r").get<i64>(), scalar_from_json(v.at("value")));
    return f;
  });
}

Json to_json(const SatakeSpec& s) {
  Json a = Json::array();
  for (const auto& x : s.alpha) a.push_back(to_json(x));
  return {{"p", s.p}, {"alpha", a}};
}

SatakeSpec satake_from_json(const Json& j) {
  require_valid(j, "satake");
  return guarded("invalid_satake", [&] {
    SatakeSpec s{j.at("p").get<int>(), {}};
    if (!is_prime(s.p)) throw InputError("invalid_satake", "p must be prime");
    for (const auto& a : j.at("alpha")) s.alpha.push_back(scalar_from_json(a));
    return s;
  });
}

MatrixSpec matrix_from_json(const Json& j) {
  require_valid(j, "matrix");
  return guarded("invalid_matrix", [&] {
    MatrixSpec m{j.at("p").get<int>(), {}};
    if (!is_prime(m.p)) throw InputError("invalid_matrix", "p must be prime");
    for (const auto& row : j.at("g")) {
      std::vector<PRational> r;
      for (const auto& e : row) r.push_back(prational_from_json(m.p, e));
      if (r.size() != j.at("g").size()) throw InputError("invalid_matrix", "matrix is not square");
      m.g.push_back(r);
    }
    return m;
  });
}

Json to_json(const MatrixSpec& m) {
  Json g = Json::array();
  for (const auto& row : m.g) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(to_json(e));
    g.push_back(r);
  }
  return {{"p", m.p}, {"g", g}};
}

ArchChar arch_char_from_json(const Json& j, Place place) {
  require_valid(j, "arch_char");
  return ArchChar{place, j.at("eps").get<int>(), j.at("t").get<double>()};
}

std::vector<Scalar> samples_from_json(const Json& j) {
  require_valid(j, "samples");
  std::vector<Scalar> out;
  for (const auto& s : j) out.push_back(scalar_from_json(s));
  return out;
}

Json to_json(const GammaReport& r) {
  return {{"gamma_closed", to_json(r.gamma_closed)},
          {"gamma_pv", to_json(r.gamma_pv)},
          {"max_coeff_diff", r.max_coeff_diff},
          {"shells", {r.shell_lo, r.shell_hi}}};
}

Json to_json(const FeReport& r) {
  return {{"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)}, {"discrepancy", r.discrepancy}};
}

Json to_json(const HankelComparison& r) {
  return {{"by_convolution", to_json(r.by_convolution)}, {"by_mellin", to_json(r.by_mellin)}, {"max_diff", r.max_diff}};
}

Json to_json(const LemmaReport& r) {
  return {{"average", to_json(r.average)}, {"count", r.count}, {"denominator_exp", r.denominator_exp}};
}

Json to_json(const StabilityReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"ell", e.ell}, {"coeff", to_json(e.coeff)}, {"matches_full", e.matches_full}});
  return {{"m", r.m},
          {"full_coeff", to_json(r.full_coeff)},
          {"entries", entries},
          {"threshold", r.threshold ? Json(*r.threshold) : Json(nullptr)}};
}

Json to_json(const HomogeneousReport& r) {
  return {{"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)}, {"discrepancy", r.discrepancy}};
}

Json to_json(const BasicZetaReport& r) {
  return {{"zeta", to_json(r.zeta)},
          {"expected", to_json(r.expected)},
          {"residual", r.residual},
          {"discrepancy", r.discrepancy}};
}

Json to_json(const BasicFourierReport& r) {
  return {{"mellin_discrepancy", r.mellin_discrepancy},
          {"residual", r.residual},
          {"gamma_times_l", to_json(r.gamma_times_l)},
          {"l_dual", to_json(r.l_dual)},
          {"l_discrepancy", r.l_discrepancy}};
}

Json to_json(const ArchFeReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"s", to_json(s.s)}, {"lhs", to_json(s.lhs)}, {"rhs", to_json(s.rhs)}, {"diff", s.diff}});
  return {{"samples", samples}, {"max_diff", r.max_diff}};
}

std::string shell_table_csv(const MultStepFunction& f) {
  std::ostringstream out;
  out.precision(17);
  out << "m,rep,re,im\n";
  for (const auto& [k, v] : f.values()) out << k.first << ',' << k.second << ',' << v.real() << ',' << v.imag() << '\n';
  return out.str();
}

}  // namespace lfactor
