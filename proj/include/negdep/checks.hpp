#pragma once

#include <optional>
#include <span>
#include <vector>

#include "negdep/measure.hpp"
#include "negdep/rational.hpp"
#include "negdep/verdict.hpp"

namespace negdep {

// Integer weights after clearing the common denominator. Every pairwise
// correlation inequality used below is scale invariant, so checks run on
// these exact integers; `denom` recovers original-measure masses for
// witnesses (mass = integer / denom).
struct ClearedMeasure {
  int n = 0;
  std::vector<Int> w;
  Int total = 0;
  Int denom = 1;

  static ClearedMeasure of(const Measure& m);
};

// Sums of weights over every partial assignment, indexed by ternary codes:
// digit i is 0 or 1 for a fixed coordinate and 2 for a free one. Powers the
// conditioning scans (conditional pair sums and projections are entries).
class PartialSumTable {
 public:
  PartialSumTable(int n, std::span<const Int> weights);

  int coords() const { return n_; }
  const Int& at(std::size_t code) const { return t_[code]; }
  std::size_t pow3(int k) const { return p3_[k]; }

 private:
  int n_;
  std::vector<std::size_t> p3_;
  std::vector<Int> t_;
};

// s11 together with the single-coordinate sums determines all four pair
// buckets: s10 = S_i - s11, s01 = S_j - s11, s00 = T - S_i - S_j + s11.
struct PairSums {
  std::vector<Int> s11;       // indexed by pair_index(i, j)
  std::vector<Int> single;    // S_i
  Int total;
};

std::size_t pair_index(int n, int i, int j);
PairSums pair_sums(int n, std::span<const Int> weights);

// First disjointly affecting increasing event pair violating negative
// association over the given integer weights, as witness JSON; masses are
// reported as integers over mass_scale. n <= 6.
std::optional<nlohmann::json> na_violation(int n, std::span<const Int> w,
                                           const Int& mass_scale);

Verdict check_NC(const Measure& m);
Verdict check_PLC(const Measure& m);   // n <= 12
Verdict check_NLC(const Measure& m);   // n <= 12
Verdict check_hNLC(const Measure& m);  // n <= 12
Verdict check_CNC(const Measure& m);   // n <= 12
Verdict check_NA(const Measure& m);    // n <= 6
Verdict check_CNA(const Measure& m);   // n <= 6
Verdict check_FM(const Measure& m);    // n <= 6
Verdict check_CFM(const Measure& m);   // n <= 6

// Searches for a field or boundary pattern whose tilt breaks the
// Feder-Mihail property. Fails with a witness or reports Unknown; it never
// certifies. n <= 6.
Verdict falsify_FMplus(const Measure& m, const Budget& budget,
                       std::uint64_t seed);

// Smallest coordinate positively correlated with f, if any. f is a
// configuration-indexed rational vector.
std::optional<int> find_positive_influence(const Measure& m,
                                           std::span<const Rat> f);

// Four-sequence averaging inequality over indices 0..n-1. Throws
// PreconditionViolated when the hypotheses fail; otherwise returns whether
// the conclusion holds (it always should; callers treat `false` as a
// falsification event).
bool lemma_four_sequence(std::span<const Rat> alpha, std::span<const Rat> beta,
                         std::span<const Rat> gamma, std::span<const Rat> delta);

}  // namespace negdep
