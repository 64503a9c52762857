#include "lfactor/corpus.hpp"

#include <cmath>

namespace lfactor {

i64 CorpusRng::below(i64 n) {
  if (n <= 0) throw std::invalid_argument("CorpusRng::below: empty range");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t v;
  do {
    v = eng_();
  } while (v >= limit);
  return static_cast<i64>(v % un);
}

double CorpusRng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

Scalar CorpusRng::unit_complex() { return std::polar(1.0, uniform(0.0, 2.0 * M_PI)); }

Scalar CorpusRng::complex_in_box(double r) { return {uniform(-r, r), uniform(-r, r)}; }

MultChar random_char(CorpusRng& rng, int p, int max_cond, bool unitary) {
  int level = rng.range(0, max_cond);
  if (p == 2 && level == 1) level = max_cond >= 2 ? 2 : 0;
  std::vector<i64> e;
  for (const auto& g : unit_group_generators(p, level)) e.push_back(rng.below(g.second));
  const Scalar t = unitary ? Scalar(1.0) : rng.unit_complex() * rng.uniform(0.5, 1.5);
  return MultChar::from_level(p, level, e, t);
}

StepFunction random_step_function(CorpusRng& rng, int p, int terms) {
  StepFunction f(p);
  for (int i = 0; i < terms; ++i) {
    const int rad = rng.range(-2, 3);
    const PRational center = PRational::frac(p, rng.below(ipow(p, 4)), rng.range(0, 2));
    const PRational twist = PRational::frac(p, rng.below(ipow(p, 3)), rng.range(0, 3));
    f.add(rng.complex_in_box(1.0), twist, center, rad);
  }
  return f;
}

MultStepFunction random_mult_function(CorpusRng& rng, int p, int level, int m_lo, int m_hi, int cosets) {
  MultStepFunction f(p, level);
  const i64 mod = ipow(p, level);
  for (int i = 0; i < cosets; ++i) {
    i64 r = 0;
    if (level > 0) {
      do {
        r = rng.below(mod);
      } while (r % p == 0);
    }
    f.add_value(rng.range(m_lo, m_hi), r, rng.complex_in_box(1.0));
  }
  return f;
}

std::vector<Scalar> random_satake(CorpusRng& rng, int n) {
  std::vector<Scalar> out;
  for (int i = 0; i < n; ++i) out.push_back(rng.unit_complex());
  return out;
}

Json corpus_generate(std::uint64_t seed, const CorpusSizes& sizes) {
  CorpusRng rng(seed);
  Json chars = Json::array();
  Json funcs = Json::array();
  Json sat = Json::array();
  const auto& ps = sizes.primes;
  if (ps.empty()) throw InputError("invalid_sizes", "corpus: no primes");
  for (int i = 0; i < sizes.characters; ++i) chars.push_back(to_json(random_char(rng, ps[i % ps.size()], 2)));
  for (int i = 0; i < sizes.functions; ++i) {
    const int p = ps[i % ps.size()];
    if (i % 2 == 0) funcs.push_back(to_json(random_step_function(rng, p)));
    else funcs.push_back(to_json(random_mult_function(rng, p, rng.range(0, 2), -3, 3)));
  }
  for (int i = 0; i < sizes.satake; ++i)
    sat.push_back(to_json(SatakeSpec{ps[i % ps.size()], random_satake(rng, 1 + i % 4)}));
  return {{"seed", seed}, {"characters", chars}, {"functions", funcs}, {"satake", sat}};
}

std::vector<FeCase> fe_corpus(std::uint64_t seed, int count) {
  CorpusRng rng(seed);
  const int primes[] = {2, 3, 5, 7};
  std::vector<FeCase> out;
  for (int i = 0; i < count; ++i) {
    const int p = primes[i % 4];
    MultChar chi = random_char(rng, p, 2);
    // Entries 1 and 3 mod 4 pin chi to ramified and unramified respectively.
    while (i % 4 == 1 && !chi.is_ramified()) chi = random_char(rng, p, 2);
    if (i % 4 == 3) chi = MultChar::unramified(p, chi.t());
    const MultChar pi = random_char(rng, p, 2);
    if (i % 2 == 0) {
      out.push_back({random_step_function(rng, p), chi, pi});
    } else {
      const int level = std::max({chi.cond(), pi.cond(), rng.range(0, 2)});
      out.push_back({random_mult_function(rng, p, level, -3, 3), chi, pi});
    }
  }
  return out;
}

Json to_json(const FeCase& c) {
  return {{"function", std::visit([](const auto& f) { return to_json(f); }, c.f)},
          {"chi", to_json(c.chi)},
          {"pi", to_json(c.pi)}};
}

}  // namespace lfactor
