// lfactor_cli: gamma factors, zeta integrals and kernel identities from the command line.
//
// Exit codes: 0 success, 1 verification failure (a discrepancy above tolerance),
// 2 input error. Failures print {"status": ..., "code": ..., "message": ...} on stderr.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "lfactor/arch_gamma.hpp"
#include "lfactor/basic_function.hpp"
#include "lfactor/corpus.hpp"
#include "lfactor/io.hpp"
#include "lfactor/kernel_hankel.hpp"
#include "lfactor/parallel.hpp"
#include "lfactor/zeta_gamma.hpp"

using namespace lfactor;

namespace {

struct Tolerances {
  double coeff = 1e-10;
  double fe = 1e-9;
  double pointwise = 1e-9;
  double lemma = 1e-10;
  double fourier = 1e-12;
  double arch_fe = 1e-5;
  double arch_zeta = 1e-6;
};

void apply_overrides(Tolerances& t, const Json& j) {
  const Json known = {"coeff", "fe", "pointwise", "lemma", "fourier", "arch_fe", "arch_zeta"};
  if (!j.is_object()) throw InputError("invalid_tolerances", "tolerances must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw InputError("invalid_tolerances", "unknown tolerance \"" + k + "\"");
    if (!v.is_number() || v.get<double>() <= 0.0)
      throw InputError("invalid_tolerances", "tolerance \"" + k + "\" must be a positive number");
  }
  t.coeff = j.value("coeff", t.coeff);
  t.fe = j.value("fe", t.fe);
  t.pointwise = j.value("pointwise", t.pointwise);
  t.lemma = j.value("lemma", t.lemma);
  t.fourier = j.value("fourier", t.fourier);
  t.arch_fe = j.value("arch_fe", t.arch_fe);
  t.arch_zeta = j.value("arch_zeta", t.arch_zeta);
}

struct Output {
  std::string path;
  std::string emit = "json";

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("output_unwritable", "cannot write " + path);
    out << text;
  }
};

int finish(const Output& out, Json report, bool pass, const std::string& csv = {}) {
  report["status"] = pass ? "ok" : "fail";
  if (!pass) report["code"] = "tolerance_exceeded";
  if (out.emit == "csv" && !csv.empty()) out.write(csv);
  else out.write(report.dump(2) + "\n");
  return pass ? 0 : 1;
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto colon = s.find(':', 1);
  if (colon == std::string::npos) throw InputError("invalid_range", "expected lo:hi, got " + s);
  try {
    const int lo = std::stoi(s.substr(0, colon));
    const int hi = std::stoi(s.substr(colon + 1));
    if (lo > hi) throw InputError("invalid_range", "empty range " + s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InputError("invalid_range", "expected lo:hi, got " + s);
  }
}

MultChar trivial_char(int p) { return MultChar::trivial(p); }

ArchSeed default_arch_seed(const ArchChar& chi) {
  if (chi.place == Place::real) return ArchSeed::hermite(((chi.eps % 2) + 2) % 2);
  return chi.eps >= 0 ? ArchSeed::complex_monomial(0, chi.eps) : ArchSeed::complex_monomial(-chi.eps, 0);
}

ArchSeed parse_arch_seed(const std::string& spec, Place place) {
  // gaussian | hermite:k | monomial:a,b
  if (spec == "gaussian") return ArchSeed::gaussian(place);
  try {
    if (spec.rfind("hermite:", 0) == 0 && place == Place::real) return ArchSeed::hermite(std::stoi(spec.substr(8)));
    if (spec.rfind("monomial:", 0) == 0 && place == Place::complex) {
      const auto rest = spec.substr(9);
      const auto comma = rest.find(',');
      if (comma != std::string::npos)
        return ArchSeed::complex_monomial(std::stoi(rest.substr(0, comma)), std::stoi(rest.substr(comma + 1)));
    }
  } catch (const std::logic_error&) {
  }
  throw InputError("invalid_seed", "unknown seed \"" + spec + "\" for this place");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic and Archimedean local factors: gamma factors, zeta integrals, kernel and Hankel identities"};
  app.require_subcommand(1);
  app.fallthrough();

  Output out;
  std::string tol_arg;
  Tolerances tol;
  app.add_option("-o,--output", out.path, "Write the result here instead of stdout");
  app.add_option("--emit", out.emit, "json or csv (csv only for shell-value tables)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tolerances", tol_arg, "JSON object (file or inline) overriding default tolerances");

  // gamma
  auto* gamma_cmd = app.add_subcommand("gamma", "gamma(s + 1/2, pi x chi, psi): closed form vs. principal value");
  int gamma_p = 0;
  std::string gamma_chi, gamma_pi;
  std::optional<int> gamma_depth;
  gamma_cmd->add_option("--p", gamma_p, "Residue characteristic")->required();
  gamma_cmd->add_option("--chi", gamma_chi, "Character JSON")->required();
  gamma_cmd->add_option("--pi", gamma_pi, "GL(1) representation as a character JSON (default trivial)");
  gamma_cmd->add_option("--depth", gamma_depth, "Shells [-depth, -1] summed by enumeration");

  // zeta
  auto* zeta_cmd = app.add_subcommand("zeta", "Z(s, phi, chi) as a rational function of X = q^{-s}");
  std::string zeta_f, zeta_chi;
  zeta_cmd->add_option("--f", zeta_f, "Function JSON (step or mult)")->required();
  zeta_cmd->add_option("--chi", zeta_chi, "Character JSON")->required();

  // fe-check
  auto* fe_cmd = app.add_subcommand("fe-check", "GL(1) functional equation");
  std::string fe_f, fe_chi, fe_pi, fe_corpus_arg;
  std::uint64_t fe_seed = 42;
  int fe_count = 50;
  fe_cmd->add_option("--f", fe_f, "Function JSON");
  fe_cmd->add_option("--chi", fe_chi, "Character JSON");
  fe_cmd->add_option("--pi", fe_pi, "Character JSON for pi (default trivial)");
  fe_cmd->add_option("--corpus", fe_corpus_arg, "'default' or a corpus JSON file");
  fe_cmd->add_option("--seed", fe_seed, "Seed of the default corpus");
  fe_cmd->add_option("--count", fe_count, "Entries of the default corpus")->check(CLI::PositiveNumber);

  // hankel
  auto* hankel_cmd = app.add_subcommand("hankel", "Hankel transform F_{pi,psi}(phi) on a range of shells");
  std::string hk_phi, hk_pi, hk_shells = "-5:5", hk_route = "both";
  std::optional<int> hk_ell;
  hankel_cmd->add_option("--phi", hk_phi, "MultStepFunction JSON")->required();
  hankel_cmd->add_option("--pi", hk_pi, "Character JSON")->required();
  hankel_cmd->add_option("--shells", hk_shells, "lo:hi (write --shells=-5:5)");
  hankel_cmd->add_option("--route", hk_route, "both, convolution or mellin")
      ->check(CLI::IsMember({"both", "convolution", "mellin"}));
  hankel_cmd->add_option("--ell", hk_ell, "Use the kernel truncated at level ell (convolution route)");

  // basic
  auto* basic_cmd = app.add_subcommand("basic", "Unramified basic function: zeta and Fourier identities");
  std::string bs_alpha, bs_chi;
  int bs_window = 12;
  int bs_cmax = 2;
  basic_cmd->add_option("--alpha", bs_alpha, "Satake parameters JSON")->required();
  basic_cmd->add_option("--window", bs_window, "Shells 0..window")->check(CLI::Range(1, 200));
  basic_cmd->add_option("--chi", bs_chi, "Unramified character JSON (default trivial)");
  basic_cmd->add_option("--c-max", bs_cmax, "Largest conductor of the Mellin components checked")->check(CLI::Range(0, 3));

  // lemma31
  auto* lemma_cmd = app.add_subcommand("lemma31", "Finite verification of the trace-average vanishing lemma");
  int lm_p = 0, lm_l0 = 1, lm_L = 2;
  std::string lm_g, lm_grid;
  std::uint64_t lm_seed = 7;
  lemma_cmd->add_option("--p", lm_p, "2 or 3")->required();
  lemma_cmd->add_option("--g", lm_g, "Matrix JSON");
  lemma_cmd->add_option("--l0", lm_l0, "l0");
  lemma_cmd->add_option("--L", lm_L, "L");
  lemma_cmd->add_option("--grid", lm_grid, "'default' runs the branch grid");
  lemma_cmd->add_option("--seed", lm_seed, "Seed of the grid");

  // arch-fe
  auto* arch_cmd = app.add_subcommand("arch-fe", "Archimedean functional equation by quadrature");
  std::string ar_place = "real", ar_chi = R"({"eps":0,"t":0})", ar_samples = "[0.3, 0.5, 0.8]", ar_seed;
  arch_cmd->add_option("--place", ar_place, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  arch_cmd->add_option("--chi", ar_chi, "ArchChar JSON");
  arch_cmd->add_option("--samples", ar_samples, "JSON list of s values");
  arch_cmd->add_option("--seed", ar_seed, "gaussian, hermite:k or monomial:a,b (default matches chi)");

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "Deterministic pseudo-random corpus");
  std::uint64_t cp_seed = 42;
  CorpusSizes sizes;
  corpus_cmd->add_option("--seed", cp_seed, "Seed");
  corpus_cmd->add_option("--characters", sizes.characters, "Number of characters")->check(CLI::NonNegativeNumber);
  corpus_cmd->add_option("--functions", sizes.functions, "Number of functions")->check(CLI::NonNegativeNumber);
  corpus_cmd->add_option("--satake", sizes.satake, "Number of Satake lists")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << Json{{"status", "error"}, {"code", "usage_error"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    if (!tol_arg.empty()) apply_overrides(tol, load_json(tol_arg));

    if (*gamma_cmd) {
      const MultChar chi = char_from_json(load_json(gamma_chi));
      const MultChar pi = gamma_pi.empty() ? trivial_char(gamma_p) : char_from_json(load_json(gamma_pi));
      if (chi.p() != gamma_p || pi.p() != gamma_p) throw InputError("prime_mismatch", "character prime differs from --p");
      const GammaReport r = gamma_pv(pi, chi, gamma_depth);
      return finish(out, to_json(r), r.max_coeff_diff <= tol.coeff);
    }

    if (*zeta_cmd) {
      const AnyFunction f = function_from_json(load_json(zeta_f));
      const MultChar chi = char_from_json(load_json(zeta_chi));
      const RationalFunc z = std::visit(
          [&](const auto& g) {
            if (g.p() != chi.p()) throw InputError("prime_mismatch", "function and character primes differ");
            return zeta(g, chi);
          },
          f);
      return finish(out, {{"zeta", to_json(z)}}, true);
    }

    if (*fe_cmd) {
      std::vector<FeCase> cases;
      if (!fe_corpus_arg.empty()) {
        if (fe_corpus_arg == "default") {
          cases = fe_corpus(fe_seed, fe_count);
        } else {
          const Json doc = load_json(fe_corpus_arg);
          require_valid(doc, "fe_corpus");
          for (const auto& e : doc)
            cases.push_back({function_from_json(e.at("function")), char_from_json(e.at("chi")), char_from_json(e.at("pi"))});
        }
      } else {
        if (fe_f.empty() || fe_chi.empty()) throw InputError("usage_error", "fe-check needs --corpus or --f and --chi");
        const MultChar chi = char_from_json(load_json(fe_chi));
        cases.push_back({function_from_json(load_json(fe_f)), chi,
                         fe_pi.empty() ? trivial_char(chi.p()) : char_from_json(load_json(fe_pi))});
      }
      for (const auto& c : cases) {
        const int fp = std::visit([](const auto& g) { return g.p(); }, c.f);
        if (fp != c.chi.p() || fp != c.pi.p()) throw InputError("prime_mismatch", "corpus entry mixes primes");
      }
      std::vector<double> disc(cases.size());
      parallel_for(cases.size(), [&](std::size_t i) {
        disc[i] = std::visit([&](const auto& g) { return verify_fe(g, cases[i].chi, cases[i].pi).discrepancy; }, cases[i].f);
      });
      Json entries = Json::array();
      double worst = 0.0;
      int failures = 0;
      for (std::size_t i = 0; i < cases.size(); ++i) {
        const bool pass = disc[i] <= tol.fe;
        failures += pass ? 0 : 1;
        worst = std::max(worst, disc[i]);
        entries.push_back({{"index", i},
                           {"p", cases[i].chi.p()},
                           {"kind", cases[i].f.index() == 0 ? "step" : "mult"},
                           {"cond_chi", cases[i].chi.cond()},
                           {"cond_pi", cases[i].pi.cond()},
                           {"discrepancy", disc[i]},
                           {"pass", pass}});
      }
      return finish(out, {{"entries", entries}, {"max_discrepancy", worst}, {"failures", failures}, {"tolerance", tol.fe}},
                    failures == 0);
    }

    if (*hankel_cmd) {
      const AnyFunction f = function_from_json(load_json(hk_phi));
      const MultChar pi = char_from_json(load_json(hk_pi));
      const auto [lo, hi] = parse_range(hk_shells);
      if (f.index() != 1) throw InputError("invalid_function", "hankel expects a MultStepFunction (kind \"mult\")");
      const auto& phi = std::get<MultStepFunction>(f);
      if (phi.p() != pi.p()) throw InputError("prime_mismatch", "function and character primes differ");
      if (hk_ell && *hk_ell < 1) throw InputError("invalid_ell", "--ell must be >= 1");
      if (hk_route == "convolution") {
        const auto r = hankel_convolve(phi, Gl1Kernel{pi}, lo, hi, hk_ell);
        return finish(out, {{"by_convolution", to_json(r)}}, true, shell_table_csv(r));
      }
      const GammaSymbol gsym = gamma_symbol(PiParams::gl1(pi), phi.level());
      if (hk_route == "mellin") {
        const auto r = hankel_via_mellin(phi, gsym, lo, hi);
        return finish(out, {{"by_mellin", to_json(r)}}, true, shell_table_csv(r));
      }
      HankelComparison c;
      c.by_convolution = hankel_convolve(phi, Gl1Kernel{pi}, lo, hi, hk_ell);
      c.by_mellin = hankel_via_mellin(phi, gsym, lo, hi);
      c.max_diff = max_abs_diff(c.by_convolution, c.by_mellin);
      return finish(out, to_json(c), c.max_diff <= tol.pointwise, shell_table_csv(c.by_convolution));
    }

    if (*basic_cmd) {
      const SatakeSpec s = satake_from_json(load_json(bs_alpha));
      const MultChar chi = bs_chi.empty() ? trivial_char(s.p) : char_from_json(load_json(bs_chi));
      if (chi.p() != s.p) throw InputError("prime_mismatch", "character prime differs from the Satake prime");
      if (chi.is_ramified()) throw InputError("ramified_character", "basic expects an unramified character");
      if (bs_window < static_cast<int>(s.alpha.size()))
        throw InputError("invalid_window", "--window must be at least the number of Satake parameters");
      for (const auto& a : s.alpha)
        if (std::abs(a) == 0.0) throw InputError("invalid_satake", "Satake parameters must be nonzero");
      const BasicZetaReport z = basic_zeta_check(s.p, s.alpha, chi, bs_window);
      const BasicFourierReport fr = basic_fourier_check(s.p, s.alpha, bs_cmax, bs_window);
      const bool pass = z.discrepancy <= tol.coeff && fr.mellin_discrepancy <= tol.coeff && fr.l_discrepancy <= tol.coeff;
      const BasicFunction b(s.p, s.alpha);
      return finish(out, {{"zeta", to_json(z)}, {"fourier", to_json(fr)}, {"shells", to_json(b.truncated(bs_window))}},
                    pass, shell_table_csv(b.truncated(bs_window)));
    }

    if (*lemma_cmd) {
      if (lm_p != 2 && lm_p != 3) throw InputError("invalid_prime", "lemma31 supports p = 2 and p = 3");
      if (!lm_grid.empty()) {
        if (lm_grid != "default") throw InputError("invalid_grid", "only --grid default is available");
        const auto grid = lemma31_grid(lm_p, lm_seed);
        std::vector<LemmaReport> reps(grid.size());
        parallel_for(grid.size(), [&](std::size_t i) {
          reps[i] = trace_average_check(lm_p, grid[i].g, grid[i].l0, grid[i].L);
        });
        Json cases = Json::array();
        bool pass = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const bool ok = std::abs(reps[i].average - grid[i].expected) <= tol.lemma;
          pass = pass && ok;
          cases.push_back({{"branch", grid[i].branch},
                           {"g", to_json(MatrixSpec{lm_p, grid[i].g})["g"]},
                           {"l0", grid[i].l0},
                           {"L", grid[i].L},
                           {"expected", to_json(grid[i].expected)},
                           {"report", to_json(reps[i])},
                           {"pass", ok}});
        }
        return finish(out, {{"p", lm_p}, {"cases", cases}}, pass);
      }
      if (lm_g.empty()) throw InputError("usage_error", "lemma31 needs --g or --grid");
      const MatrixSpec m = matrix_from_json(load_json(lm_g));
      if (m.p != lm_p) throw InputError("prime_mismatch", "matrix prime differs from --p");
      try {
        return finish(out, to_json(trace_average_check(lm_p, m.g, lm_l0, lm_L)), true);
      } catch (const FunctionError& e) {
        throw InputError("lemma_precondition", e.what());
      }
    }

    if (*arch_cmd) {
      const Place place = ar_place == "real" ? Place::real : Place::complex;
      const ArchChar chi = arch_char_from_json(load_json(ar_chi), place);
      const std::vector<Scalar> samples = samples_from_json(load_json(ar_samples));
      const ArchSeed seed = ar_seed.empty() ? default_arch_seed(chi) : parse_arch_seed(ar_seed, place);
      ArchFeReport r;
      try {
        r = arch_fe_check(seed, chi, samples);
      } catch (const ArchPoleError& e) {
        throw InputError("pole_proximity", e.what());
      } catch (const ArchError& e) {
        throw InputError("non_convergent", e.what());
      }
      return finish(out, to_json(r), r.max_diff <= tol.arch_fe);
    }

    if (*corpus_cmd) {
      const Json doc = corpus_generate(cp_seed, sizes);
      out.write(doc.dump(2) + "\n");
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << Json{{"status", "error"}, {"code", e.code()}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"status", "error"}, {"code", "invalid_input"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 2;
}
