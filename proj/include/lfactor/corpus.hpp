#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lfactor/io.hpp"

namespace lfactor {

/// mt19937_64 with fixed reductions, so corpora are identical across
/// standard libraries for a given seed.
class CorpusRng {
 public:
  explicit CorpusRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, n).
  i64 below(i64 n);
  /// Uniform in [lo, hi].
  int range(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Scalar unit_complex();
  Scalar complex_in_box(double r);

 private:
  std::mt19937_64 eng_;
};

/// Conductor drawn from [0, max_cond] (1 skipped for p = 2); t = 1 when unitary
/// is set, else a random nonzero value.
MultChar random_char(CorpusRng& rng, int p, int max_cond, bool unitary = false);
StepFunction random_step_function(CorpusRng& rng, int p, int terms = 3);
MultStepFunction random_mult_function(CorpusRng& rng, int p, int level, int m_lo, int m_hi, int cosets = 4);
std::vector<Scalar> random_satake(CorpusRng& rng, int n);

struct CorpusSizes {
  int characters = 20;
  int functions = 20;
  int satake = 10;
  std::vector<int> primes = {2, 3, 5, 7};
};

Json corpus_generate(std::uint64_t seed, const CorpusSizes& sizes);

struct FeCase {
  AnyFunction f;
  MultChar chi;
  MultChar pi;
};

/// Functional-equation corpus: alternating StepFunction / MultStepFunction
/// inputs over p in {2, 3, 5, 7}, conductors <= 2, ramified and unramified chi.
std::vector<FeCase> fe_corpus(std::uint64_t seed, int count);
Json to_json(const FeCase& c);

}  // namespace lfactor
