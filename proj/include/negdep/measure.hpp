#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "negdep/rational.hpp"

namespace negdep {

// A configuration of n binary coordinates packed into a mask. Coordinate i
// (0-based everywhere in the C++ API; 1-based only in rendered reports and
// bitstrings, where coordinate 1 is the leftmost character) occupies bit i.
using Config = std::uint32_t;

inline constexpr int kMaxCoords = 24;

inline int popcount(Config c) { return __builtin_popcount(c); }

// Finitely supported nonnegative weight assignment on {0,1}^n, not
// necessarily normalized. Normalization status is data, not an invariant:
// every operation documents what it does about mass.
class Measure {
 public:
  Measure(int n, std::vector<Rat> weights, std::string label = "");

  int coords() const { return n_; }
  Config configs() const { return Config(1) << n_; }
  const Rat& weight(Config c) const { return w_[c]; }
  const std::vector<Rat>& weights() const { return w_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  Rat total_mass() const;
  bool is_normalized() const { return total_mass() == 1; }
  std::vector<Config> support() const;

 private:
  int n_;
  std::vector<Rat> w_;
  std::string label_;
};

// Partial assignment of values to distinct coordinates.
struct Assignment {
  std::vector<std::pair<int, int>> fixed;  // (coordinate, value in {0,1})

  void fix(int coord, int value) { fixed.emplace_back(coord, value); }
  bool empty() const { return fixed.empty(); }
  void validate(int n) const;
};

struct FieldEntry {
  bool infinite = false;
  Rat value = 1;  // ignored when infinite

  static FieldEntry finite(Rat v) { return FieldEntry{false, std::move(v)}; }
  static FieldEntry inf() { return FieldEntry{true, 0}; }
};

// External field W: per-coordinate multipliers in [0, oo]. W_i = 0 conditions
// on eta_i = 0, W_i = oo conditions on eta_i = 1; those coordinates disappear
// from the result.
struct ExternalField {
  std::vector<FieldEntry> entries;

  static ExternalField ones(int n);
  void validate(int n) const;
  bool all_finite_positive() const;
};

// Result of an operation that may drop coordinates: kept[j] is the original
// index of the result's coordinate j (strictly increasing).
struct Relabeled {
  Measure measure;
  std::vector<int> kept;
};

// Normalized level masses r_0..r_n of a measure.
struct RankSequence {
  std::vector<Rat> r;

  int levels() const { return static_cast<int>(r.size()) - 1; }
};

struct SymmetryType {
  enum Kind { Exchangeable, AlmostExchangeable, Neither } kind;
  // For AlmostExchangeable: the smallest coordinate whose removal leaves the
  // measure invariant under all permutations of the rest.
  std::optional<int> pivot;
};

Measure normalize(const Measure& m);

// Conditional measure given the assignment, normalized, on the free
// coordinates in their original order.
Relabeled condition(const Measure& m, const Assignment& a);

// Normalized W-tilted measure; 0/oo entries are routed through condition().
Relabeled impose_field(const Measure& m, const ExternalField& w);

// Marginal on `keep` (strictly increasing coordinate list); total mass is
// preserved, no normalization happens.
Relabeled project(const Measure& m, const std::vector<int>& keep);

RankSequence rank_sequence(const Measure& m);

// Weight of every configuration scaled by a[|eta|], then normalized.
Measure rank_rescale(const Measure& m, const std::vector<Rat>& a);

// nu'(eta) = nu(complement of eta); raw weights, mass untouched.
Measure complement_measure(const Measure& m);

SymmetryType symmetry_type(const Measure& m);

}  // namespace negdep
