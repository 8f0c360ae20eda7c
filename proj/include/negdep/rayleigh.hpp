#pragma once

#include <vector>

#include "negdep/checks.hpp"
#include "negdep/measure.hpp"
#include "negdep/verdict.hpp"

namespace negdep {

// Correlation-gap polynomial of a coordinate pair: the cleared-form pair
// inequality gap of the tilted measure, as a polynomial in the remaining
// field variables with per-variable degree <= 2. Coefficients are exact
// integers for the denominator-cleared weights; `denom` squares back to
// original-measure scale.
class RayleighPolynomial {
 public:
  RayleighPolynomial(int n, int i, int j, std::vector<Int> coeff, Int denom);

  int coords() const { return n_; }
  int pair_i() const { return i_; }
  int pair_j() const { return j_; }
  // Coordinates the polynomial's variables refer to, ascending.
  const std::vector<int>& vars() const { return vars_; }
  const std::vector<Int>& coefficients() const { return coeff_; }
  const Int& cleared_denominator() const { return denom_; }

  bool all_coefficients_nonnegative() const;
  bool identically_zero() const;

  // Gap value for the original rational measure under finite positive values
  // for the remaining coordinates (indexed as in vars()).
  Rat evaluate(const std::vector<Rat>& w) const;

 private:
  int n_, i_, j_;
  std::vector<int> vars_;
  std::vector<Int> coeff_;  // ternary-indexed over vars()
  Int denom_;
};

RayleighPolynomial rayleigh_polynomial(const Measure& m, int i, int j);

// Decides whether every external-field tilt keeps all pairs negatively
// correlated. Pipeline: exhaustive boundary patterns (the conditioning scan),
// per-pair nonnegative-coefficient rule, seeded sampling plus coordinate
// descent for falsification, then branch-and-bound certification over
// t = W/(1+W) boxes. Exact Fails/Holds; Unknown when budgets run out.
Verdict check_NCplus(const Measure& m, const Budget& budget,
                     std::uint64_t seed);

// Field-closure of negative association: falsified by boundary patterns or
// sampled fields; certified only through the symmetry rules (exchangeable
// rank equivalence, almost-exchangeable pair-closure equivalence).
Verdict check_NAplus(const Measure& m, const Budget& budget,
                     std::uint64_t seed);

Verdict check_ULC_sequence(const std::vector<Rat>& seq);
Verdict check_ULC(const Measure& m);
Verdict check_LC_sequence(const std::vector<Rat>& seq);
Verdict check_LC(const Measure& m);
Verdict check_unimodal_sequence(const std::vector<Rat>& seq);
Verdict check_unimodal(const Measure& m);

// Log-concavity of all projections of size <= m under every external field.
// m <= 3 is decided through check_NCplus; m >= 4 is falsification only.
Verdict check_LCm(const Measure& m, int order, const Budget& budget,
                  std::uint64_t seed);

// alpha_i = C(n,i)^{-1} sum_{|eta|=i} mu(eta) mu(complement eta), normalized.
std::vector<Rat> alpha_sequence(const Measure& m);

Verdict check_APP(const Measure& m);   // n even
Verdict check_CAPP(const Measure& m);  // n <= 12

// Sum of mu(X) mu(Y) over unordered pairs {X, Y} with |X| = r, |Y| = s,
// |X and Y| = t, on the normalized measure (X = Y only when r = s = t).
Rat sigma_sum(const Measure& m, int r, int s, int t);

// The four-coordinate pair-overlap inequality: 3 * Sigma^0_{1,3} <= 4 *
// Sigma^0_{2,2}. Callers apply it to pair-closure-evidenced measures.
bool lemma41_inequality(const Measure& m);

}  // namespace negdep
