#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "negdep/measure.hpp"
#include "negdep/verdict.hpp"

namespace negdep {

// ---------------------------------------------------------------------------
// Two-block threshold family.
//
// For k >= 2 and 0 < beta < 1, a measure on 2k coordinates supported on the
// three middle levels k-1, k, k+1. Writing s = |eta| and using coordinate 1
// as the distinguished pivot:
//   s == k-1:  weight 1      if eta_1 = 1,   beta^2 if eta_1 = 0
//   s == k  :  weight beta
//   s == k+1:  weight beta^2 if eta_1 = 1,   1      if eta_1 = 0
//   otherwise: weight 0.
// The result is almost exchangeable with pivot coordinate 1 and sits exactly
// at the boundary of several dependence properties as beta moves through
// explicit thresholds, which makes it the family of choice for boundary
// witnesses. Requires 2k <= 24 (CapExceeded otherwise).
Measure nu_family(int k, const Rat& beta);

// Unnormalized level sums a_0..a_2k of nu_family(k, beta), computed in closed
// form so that large k (beyond the coordinate cap) is still exact:
//   a_{k-1} = C(2k-1, k-2)        + C(2k-1, k-1) * beta^2
//   a_k     = C(2k, k)            * beta
//   a_{k+1} = C(2k-1, k) * beta^2 + C(2k-1, k+1)
// and zero elsewhere.
std::vector<Rat> nu_rank_sequence(int k, const Rat& beta);

// Exchangeable measure with prescribed unnormalized level sums a_0..a_n:
// every configuration at level r gets weight a_r / C(n, r). Entries must be
// nonnegative (InvalidDistribution) and not all zero (ZeroMass).
Measure exchangeable_from_rank(const std::vector<Rat>& a);

// Independent coordinates with success probabilities p_1..p_n in [0, 1]
// (InvalidDistribution otherwise): weight(eta) = prod p_i^eta_i (1-p_i)^(1-eta_i).
Measure product_measure(const std::vector<Rat>& p);

// ---------------------------------------------------------------------------
// Occupancy measures: m identically distributed balls dropped independently
// into n urns; coordinate j of the outcome records whether urn j received at
// least thresholds[j] balls.
struct UrnSpec {
  int urns = 0;
  int balls = 0;
  std::vector<Rat> p;            // urn probabilities, nonnegative, sum 1
  std::vector<long> thresholds;  // per-urn occupancy thresholds >= 1;
                                 // empty means all 1 (plain occupancy)
};

// Exact occupancy measure via a dynamic program over urns whose state is
// (balls placed so far, indicator mask of the urns already decided); the
// multinomial normalization m! is applied once at the end. Caps: balls <= 12,
// urns <= 10 (CapExceeded). Bad probabilities or thresholds raise
// InvalidDistribution.
Measure urn_measure(const UrnSpec& spec);

// A block of `count` interchangeable urns sharing one probability and one
// occupancy threshold.
struct UrnClass {
  long count = 0;
  Rat p;
  long threshold = 1;
};

// Normalized distribution of the number of threshold-satisfying urns, for
// occupancy models far too large to tabulate on the cube. Collapses
// interchangeable urns and runs the occupancy dynamic program with state
// (balls placed, satisfying urns so far), so the cost is linear in the total
// number of urns and polynomial in `balls`. Returns masses for counts
// 0..balls. Class probabilities must be nonnegative and sum (weighted by
// count) to 1; thresholds >= 1; balls >= 0 (InvalidDistribution).
std::vector<Rat> urn_rank_sequence(int balls, const std::vector<UrnClass>& classes);

// ---------------------------------------------------------------------------
// Graphs and graphic measures. Vertices are named; edges are unordered pairs
// (parallel edges and self-loops permitted structurally, though self-loops
// never appear in any acyclic subset) with optional positive rational
// weights defaulting to 1.
struct Graph {
  struct Edge {
    int u = 0;
    int v = 0;
    Rat w = 1;
  };
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
};

// Wire format: {"vertices": ["x", ...], "edges": [["u", "v"], ["u", "v", "3/2"], ...]}.
// Edge endpoints refer to vertex names; the optional third entry is the
// weight. Unknown vertex names or nonpositive weights raise Parse /
// InvalidDistribution respectively.
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& g);

bool graph_connected(const Graph& g);

// Two hub vertices x, y joined by an edge, plus k >= 1 spokes z_1..z_k each
// adjacent to both hubs. Edge order (and hence coordinate order of derived
// measures): xy, then x z_1 .. x z_k, then y z_1 .. y z_k.
Graph gadget_graph(int k);

// Measure on {0,1}^|E| supported on acyclic edge subsets (forests), each
// weighted by the product of its edge weights. Requires |E| <= 24
// (CapExceeded).
Measure spanning_forest_measure(const Graph& g);

// Same, restricted to spanning trees (acyclic subsets with |V| - 1 edges).
// Requires a connected graph (Disconnected) and |E| <= 24 (CapExceeded).
Measure spanning_tree_measure(const Graph& g);

// ---------------------------------------------------------------------------
// Matroids, given by the explicit list of independent sets over a ground set
// of at most 24 elements. Construction verifies nonemptiness and downward
// closure always, and the exchange property when the ground set has at most
// 12 elements (larger inputs are accepted as-is; the graphic constructor is
// correct by construction).
struct Matroid {
  int ground = 0;
  std::vector<Config> independent;  // sorted ascending, deduplicated
};

Matroid make_matroid(int ground, std::vector<Config> independent);

// Wire format: {"ground": 4, "independent": ["0000", "1000", ...]} with the
// same bitstring convention as measures (element 1 leftmost).
Matroid matroid_from_json(const nlohmann::json& j);
nlohmann::json matroid_to_json(const Matroid& m);

// Independent sets = acyclic edge subsets of g. Requires |E| <= 24.
Matroid graphic_matroid(const Graph& g);

// Counts a_0..a_n of independent sets by size (a_k = number of independent
// sets with k elements; trailing ranks with no independent sets are kept as
// zeros).
std::vector<Int> independence_numbers(const Matroid& m);

// Measure on {0,1}^ground supported on the independent sets, each weighted by
// the product of per-element weights (all 1 when `weights` is empty).
// Weights must be positive rationals, one per ground element
// (InvalidDistribution).
Measure matroid_measure(const Matroid& m, const std::vector<Rat>& weights = {});

// Ultra log-concavity of the independence numbers: checks
// (a_i / C(n, i))^2 >= (a_{i-1} / C(n, i-1)) (a_{i+1} / C(n, i+1)) across the
// support, with trailing zeros permitted and an internal zero an automatic
// failure.
Verdict mason_check(const Matroid& m);

// Antipodal-pair comparison for the uniform measure on independent sets.
// Requires an even ground set (OddGroundSet) of at most 10 elements
// (CapExceeded).
Verdict dowling_app_check(const Matroid& m);

}  // namespace negdep
