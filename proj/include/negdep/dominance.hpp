#pragma once

#include <json.hpp>

#include <optional>
#include <tuple>
#include <vector>

#include "negdep/measure.hpp"
#include "negdep/verdict.hpp"

namespace negdep {

// Exact joint distribution witnessing a dominance or covering relation:
// entries (upper, lower, weight) with weights summing to one and marginals
// equal to the two coupled measures.
struct Coupling {
  int n = 0;
  std::vector<std::tuple<Config, Config, Rat>> entries;

  nlohmann::json to_json() const;
};

struct DominanceResult {
  bool dominates = false;
  std::optional<Coupling> coupling;  // present iff dominates
  nlohmann::json violation;          // populated iff not dominates
};

// True iff some coupling supported on {(eta, zeta) : eta >= zeta
// coordinatewise} has marginals (mu, nu); decided by exact max-flow
// feasibility. On failure the min cut is converted into an increasing event
// U with mu(U) < nu(U), reported through its minimal elements.
DominanceResult stochastic_dominates(const Measure& mu, const Measure& nu);

// Same feasibility question with arcs restricted to equal configurations
// and single-step covers (eta exceeds zeta in exactly one coordinate). On
// failure reports the deficient lower set from the cut.
DominanceResult stochastically_covers(const Measure& mu, const Measure& nu);

// Every defined pair of rank levels l > k has the level-l conditional
// measure dominating the level-k one; witness = (l, k, violating up-set).
Verdict check_NMP(const Measure& m);

// Every coordinate with both conditionings defined has mu(.|eta_i=0)
// covering mu(.|eta_i=1) after both are projected off coordinate i.
Verdict check_SCP(const Measure& m);

}  // namespace negdep
