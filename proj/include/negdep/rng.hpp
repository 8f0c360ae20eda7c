#pragma once

#include <cstdint>
#include <random>

#include "negdep/measure.hpp"
#include "negdep/rational.hpp"

namespace negdep {

// Deterministic source for all sampling; mt19937_64 has a fixed,
// implementation-independent output sequence, so a (seed, budget) pair
// reproduces a run everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform in [lo, hi].
  long uniform(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(gen_);
  }

  // Positive rational with numerator/denominator up to `bound`.
  Rat positive_rational(long bound) {
    Rat q(uniform(1, bound), uniform(1, bound));
    q.canonicalize();
    return q;
  }

  // Nonnegative rational, zero with probability zero_percent/100.
  Rat sparse_rational(long bound, int zero_percent) {
    if (uniform(0, 99) < zero_percent) return Rat(0);
    return positive_rational(bound);
  }

  // Log-uniform dyadic grid point 2^e, e in [-span, span], mixed with
  // occasional general rationals; the field sampler's single-entry law.
  Rat field_entry(int span) {
    if (uniform(0, 3) == 0) return positive_rational(1 << span);
    const long e = uniform(-span, span);
    if (e >= 0) return Rat(Int(1) << e);
    Rat q(1, Int(1) << (-e));
    q.canonicalize();
    return q;
  }

  ExternalField random_field(int n, int span) {
    ExternalField w;
    w.entries.reserve(n);
    for (int i = 0; i < n; ++i) {
      w.entries.push_back(FieldEntry::finite(field_entry(span)));
    }
    return w;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace negdep
