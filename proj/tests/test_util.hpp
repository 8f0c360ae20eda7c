#pragma once

// Shared brute-force oracles and generators for the test suites. Everything
// here recomputes a quantity the library obtains by a smarter route, using
// the most naive method that is obviously correct, so that agreement between
// the two is meaningful evidence.

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "negdep/dominance.hpp"
#include "negdep/errors.hpp"
#include "negdep/events.hpp"
#include "negdep/families.hpp"
#include "negdep/measure.hpp"
#include "negdep/measure_io.hpp"
#include "negdep/rational.hpp"
#include "negdep/rng.hpp"

namespace negdep::testing {

inline Rat R(const std::string& text) { return parse_rational(text); }

// Runs fn and reports the library error code it raised, if any.
template <typename Fn>
std::optional<ErrorCode> error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// All up-sets of {0,1}^n as configuration masks, found by filtering every
// subset of the cube for upward closure. Only feasible for n <= 4.
inline std::vector<std::uint32_t> brute_force_upsets(int n) {
  const int configs = 1 << n;
  std::vector<std::uint32_t> result;
  const std::uint64_t limit = std::uint64_t(1) << configs;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    bool closed = true;
    for (int c = 0; c < configs && closed; ++c) {
      if (!((mask >> c) & 1)) continue;
      for (int i = 0; i < n; ++i) {
        if (!((mask >> (c | (std::uint64_t(1) << i))) & 1)) {
          closed = false;
          break;
        }
      }
    }
    if (closed) result.push_back(static_cast<std::uint32_t>(mask));
  }
  return result;
}

// Occupancy measure computed by enumerating all urns^balls placements, the
// definition itself, with no dynamic programming.
inline Measure urn_by_enumeration(const UrnSpec& spec) {
  const int n = spec.urns;
  const int balls = spec.balls;
  std::vector<long> thresholds(n, 1);
  for (std::size_t i = 0; i < spec.thresholds.size() && i < std::size_t(n); ++i)
    thresholds[i] = spec.thresholds[i];
  std::vector<Rat> weights(std::size_t(1) << n, Rat(0));
  std::vector<int> place(balls, 0);
  while (true) {
    Rat w(1);
    std::vector<int> count(n, 0);
    for (int b = 0; b < balls; ++b) {
      w *= spec.p[static_cast<std::size_t>(place[b])];
      ++count[place[b]];
    }
    Config c = 0;
    for (int j = 0; j < n; ++j)
      if (count[j] >= thresholds[j]) c |= Config(1) << j;
    weights[c] += w;
    int b = 0;
    while (b < balls && ++place[b] == n) {
      place[b] = 0;
      ++b;
    }
    if (b == balls) break;
  }
  return Measure(n, std::move(weights), "urn-enumeration");
}

// True when the two measures define the same probability distribution.
inline bool same_distribution(const Measure& a, const Measure& b) {
  if (a.coords() != b.coords()) return false;
  const Measure na = normalize(a);
  const Measure nb = normalize(b);
  for (Config c = 0; c < na.configs(); ++c)
    if (na.weight(c) != nb.weight(c)) return false;
  return true;
}

// mu stochastically dominates nu iff mu(U) >= nu(U) for every up-set U;
// checked exhaustively over the cached up-set table. n <= 5.
inline bool dominates_by_upsets(const Measure& mu, const Measure& nu) {
  const int n = mu.coords();
  const Rat mu_total = mu.total_mass();
  const Rat nu_total = nu.total_mass();
  for (std::uint64_t points : upsets_table(n)) {
    Rat mu_mass(0), nu_mass(0);
    for (Config c = 0; c < mu.configs(); ++c) {
      if ((points >> c) & 1) {
        mu_mass += mu.weight(c);
        nu_mass += nu.weight(c);
      }
    }
    if (mu_mass * nu_total < nu_mass * mu_total) return false;
  }
  return true;
}

// Acyclicity of an edge subset by union-find; self-loops and doubled
// parallel edges count as cycles.
inline bool edge_subset_acyclic(const Graph& g, Config subset) {
  std::vector<int> parent(g.vertices.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (!((subset >> e) & 1)) continue;
    const int ru = find(g.edges[e].u);
    const int rv = find(g.edges[e].v);
    if (ru == rv) return false;
    parent[ru] = rv;
  }
  return true;
}

// Verifies a coupling is a genuine witness: every entry pairs an upper
// configuration with a lower one it dominates coordinatewise (differing in
// at most one coordinate when single_step), weights are positive, and both
// marginals match the normalized measures exactly.
inline bool coupling_matches(const Coupling& cpl, const Measure& upper,
                             const Measure& lower, bool single_step) {
  const int n = upper.coords();
  if (cpl.n != n || lower.coords() != n) return false;
  std::vector<Rat> upper_marginal(std::size_t(1) << n, Rat(0));
  std::vector<Rat> lower_marginal(std::size_t(1) << n, Rat(0));
  for (const auto& [up, low, weight] : cpl.entries) {
    if ((up & low) != low) return false;
    if (single_step && popcount(up ^ low) > 1) return false;
    if (weight <= 0) return false;
    upper_marginal[up] += weight;
    lower_marginal[low] += weight;
  }
  const Measure nu_upper = normalize(upper);
  const Measure nu_lower = normalize(lower);
  for (Config c = 0; c < nu_upper.configs(); ++c) {
    if (upper_marginal[c] != nu_upper.weight(c)) return false;
    if (lower_marginal[c] != nu_lower.weight(c)) return false;
  }
  return true;
}

// Mass, under the normalized measure, of the up-set generated by the given
// minimal configurations (bitstrings in wire convention).
inline Rat upset_mass_from_generators(const Measure& m,
                                      const std::vector<std::string>& generators) {
  const int n = m.coords();
  const Measure nm = normalize(m);
  std::vector<Config> gens;
  gens.reserve(generators.size());
  for (const std::string& g : generators) gens.push_back(config_from_bitstring(g, n));
  Rat mass(0);
  for (Config c = 0; c < nm.configs(); ++c) {
    for (Config g : gens) {
      if ((c & g) == g) {
        mass += nm.weight(c);
        break;
      }
    }
  }
  return mass;
}

// Re-evaluates the plain pair inequality for 1-based coordinates (i, j) of
// the measure tilted by a witness field whose entries are rational strings,
// "0", or "inf". Returns P(eta_i = eta_j = 1) - P(eta_i = 1) P(eta_j = 1)
// of the tilted measure; a positive value is a strict violation. If either
// coordinate was conditioned away by the field, returns 0.
inline Rat pair_correlation_under_field(const Measure& m,
                                        const std::vector<std::string>& field,
                                        int i, int j) {
  ExternalField w;
  w.entries.reserve(field.size());
  for (const std::string& entry : field) {
    if (entry == "inf") {
      w.entries.push_back(FieldEntry::inf());
    } else {
      w.entries.push_back(FieldEntry::finite(parse_rational(entry)));
    }
  }
  const Relabeled tilted = impose_field(m, w);
  int pi = -1, pj = -1;
  for (int t = 0; t < tilted.measure.coords(); ++t) {
    if (tilted.kept[t] == i - 1) pi = t;
    if (tilted.kept[t] == j - 1) pj = t;
  }
  if (pi < 0 || pj < 0) return Rat(0);
  Rat p11(0), pi1(0), pj1(0);
  for (Config c = 0; c < tilted.measure.configs(); ++c) {
    const Rat& weight = tilted.measure.weight(c);
    const bool bi = (c >> pi) & 1;
    const bool bj = (c >> pj) & 1;
    if (bi && bj) p11 += weight;
    if (bi) pi1 += weight;
    if (bj) pj1 += weight;
  }
  const Rat total = tilted.measure.total_mass();
  return p11 * total - pi1 * pj1;
}

struct LemmaInstance {
  std::vector<Rat> alpha, beta, gamma, delta;
};

// Draws a random instance satisfying every hypothesis of the four-sequence
// averaging inequality: nonnegative entries, alpha and beta not identically
// zero, gamma and delta nondecreasing with gamma[i] >= delta[j] for j <= i,
// and the averaged comparison
//   (sum alpha*gamma)(sum beta) <= (sum beta*delta)(sum alpha).
// Rejection-samples until the averaged comparison holds; taking gamma = delta
// succeeds about half the time, so this terminates quickly.
inline LemmaInstance lemma_instance(Rng& rng) {
  while (true) {
    const int len = static_cast<int>(rng.uniform(1, 6));
    auto nonneg_vector = [&](int zero_percent) {
      std::vector<Rat> v(len);
      bool any_positive = false;
      for (Rat& q : v) {
        q = rng.sparse_rational(6, zero_percent);
        if (q > 0) any_positive = true;
      }
      return std::pair(std::move(v), any_positive);
    };
    auto [alpha, alpha_ok] = nonneg_vector(40);
    auto [beta, beta_ok] = nonneg_vector(40);
    if (!alpha_ok || !beta_ok) continue;
    std::vector<Rat> delta(len), gamma(len);
    Rat level(0);
    for (int t = 0; t < len; ++t) {
      level += rng.sparse_rational(4, 50);
      delta[t] = level;
    }
    Rat bump(0);
    for (int t = 0; t < len; ++t) {
      bump += rng.sparse_rational(3, 70);
      gamma[t] = delta[t] + bump;
    }
    auto averaged_ok = [&](const std::vector<Rat>& g) {
      Rat alpha_g(0), alpha_sum(0), beta_delta(0), beta_sum(0);
      for (int t = 0; t < len; ++t) {
        alpha_g += alpha[t] * g[t];
        alpha_sum += alpha[t];
        beta_delta += beta[t] * delta[t];
        beta_sum += beta[t];
      }
      return alpha_g * beta_sum <= beta_delta * alpha_sum;
    };
    if (averaged_ok(gamma)) return {alpha, beta, gamma, delta};
    if (averaged_ok(delta)) return {alpha, beta, delta, delta};
  }
}

}  // namespace negdep::testing
