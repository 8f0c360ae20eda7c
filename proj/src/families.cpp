#include "negdep/families.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "negdep/errors.hpp"
#include "negdep/measure_io.hpp"
#include "negdep/rational.hpp"
#include "negdep/rayleigh.hpp"

namespace negdep {

namespace {

void require_coord_cap(int n, const std::string& what) {
  if (n > kMaxCoords) {
    fail(ErrorCode::CapExceeded,
         what + " needs " + std::to_string(n) + " coordinates; cap is " +
             std::to_string(kMaxCoords));
  }
}

// Union-find over vertex indices; returns false when joining u and v would
// close a cycle (they are already connected).
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool join(int u, int v) {
    const int ru = find(u);
    const int rv = find(v);
    if (ru == rv) return false;
    parent_[ru] = rv;
    return true;
  }

 private:
  std::vector<int> parent_;
};

bool subset_acyclic(const Graph& g, Config subset) {
  DisjointSets ds(static_cast<int>(g.vertices.size()));
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (!(subset >> e & 1)) continue;
    if (!ds.join(g.edges[e].u, g.edges[e].v)) return false;
  }
  return true;
}

Rat subset_weight(const Graph& g, Config subset) {
  Rat w = 1;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (subset >> e & 1) w *= g.edges[e].w;
  }
  return w;
}

void validate_graph_weights(const Graph& g) {
  for (const Graph::Edge& e : g.edges) {
    if (e.w <= 0) {
      fail(ErrorCode::InvalidDistribution, "edge weights must be positive");
    }
    if (e.u < 0 || e.v < 0 || e.u >= static_cast<int>(g.vertices.size()) ||
        e.v >= static_cast<int>(g.vertices.size())) {
      fail(ErrorCode::ParameterOutOfRange, "edge endpoint out of range");
    }
  }
}

std::vector<std::string> bitstring_list(const std::vector<Config>& sets, int n) {
  std::vector<std::string> out;
  out.reserve(sets.size());
  for (Config c : sets) out.push_back(config_to_bitstring(c, n));
  return out;
}

}  // namespace

Measure nu_family(int k, const Rat& beta) {
  if (k < 2) fail(ErrorCode::ParameterOutOfRange, "family needs k >= 2");
  if (beta <= 0 || beta >= 1) {
    fail(ErrorCode::ParameterOutOfRange,
         "family parameter must satisfy 0 < beta < 1; got " +
             format_rational(beta));
  }
  const int n = 2 * k;
  require_coord_cap(n, "two-block threshold measure with k=" + std::to_string(k));
  const Rat beta2 = beta * beta;
  std::vector<Rat> w(Config(1) << n, Rat(0));
  for (Config c = 0; c < (Config(1) << n); ++c) {
    const int s = popcount(c);
    const bool pivot = (c & 1) != 0;
    if (s == k - 1) {
      w[c] = pivot ? Rat(1) : beta2;
    } else if (s == k) {
      w[c] = beta;
    } else if (s == k + 1) {
      w[c] = pivot ? beta2 : Rat(1);
    }
  }
  return Measure(n, std::move(w),
                 "nu(k=" + std::to_string(k) + ",beta=" + format_rational(beta) + ")");
}

std::vector<Rat> nu_rank_sequence(int k, const Rat& beta) {
  if (k < 2) fail(ErrorCode::ParameterOutOfRange, "family needs k >= 2");
  if (beta <= 0 || beta >= 1) {
    fail(ErrorCode::ParameterOutOfRange,
         "family parameter must satisfy 0 < beta < 1; got " +
             format_rational(beta));
  }
  const Rat beta2 = beta * beta;
  std::vector<Rat> a(2 * k + 1, Rat(0));
  a[k - 1] = Rat(binomial(2 * k - 1, k - 2)) + Rat(binomial(2 * k - 1, k - 1)) * beta2;
  a[k] = Rat(binomial(2 * k, k)) * beta;
  a[k + 1] = Rat(binomial(2 * k - 1, k)) * beta2 + Rat(binomial(2 * k - 1, k + 1));
  return a;
}

Measure exchangeable_from_rank(const std::vector<Rat>& a) {
  if (a.empty()) {
    fail(ErrorCode::ParameterOutOfRange, "level sums must cover levels 0..n");
  }
  const int n = static_cast<int>(a.size()) - 1;
  require_coord_cap(n, "exchangeable measure");
  bool any = false;
  for (const Rat& v : a) {
    if (v < 0) {
      fail(ErrorCode::InvalidDistribution, "level sums must be nonnegative");
    }
    if (v > 0) any = true;
  }
  if (!any) fail(ErrorCode::ZeroMass, "all level sums are zero");
  std::vector<Rat> per_level(n + 1);
  for (int s = 0; s <= n; ++s) per_level[s] = a[s] / Rat(binomial(n, s));
  std::vector<Rat> w(Config(1) << n);
  for (Config c = 0; c < (Config(1) << n); ++c) w[c] = per_level[popcount(c)];
  return Measure(n, std::move(w), "exchangeable(n=" + std::to_string(n) + ")");
}

Measure product_measure(const std::vector<Rat>& p) {
  const int n = static_cast<int>(p.size());
  require_coord_cap(n, "product measure");
  for (const Rat& q : p) {
    if (q < 0 || q > 1) {
      fail(ErrorCode::InvalidDistribution,
           "success probabilities must lie in [0, 1]; got " + format_rational(q));
    }
  }
  std::vector<Rat> w{Rat(1)};
  for (int i = 0; i < n; ++i) {
    std::vector<Rat> next(w.size() << 1);
    const Rat miss = Rat(1) - p[i];
    for (Config c = 0; c < static_cast<Config>(w.size()); ++c) {
      next[c] = w[c] * miss;
      next[c | (Config(1) << i)] = w[c] * p[i];
    }
    w = std::move(next);
  }
  return Measure(n, std::move(w), "product(n=" + std::to_string(n) + ")");
}

Measure urn_measure(const UrnSpec& spec) {
  if (spec.urns < 1) fail(ErrorCode::ParameterOutOfRange, "need at least one urn");
  if (spec.balls < 0) fail(ErrorCode::ParameterOutOfRange, "ball count must be nonnegative");
  if (spec.urns > 10) {
    fail(ErrorCode::CapExceeded, "occupancy cube supports at most 10 urns");
  }
  if (spec.balls > 12) {
    fail(ErrorCode::CapExceeded, "occupancy cube supports at most 12 balls");
  }
  if (static_cast<int>(spec.p.size()) != spec.urns) {
    fail(ErrorCode::InvalidDistribution,
         "need exactly one probability per urn");
  }
  std::vector<long> thresholds = spec.thresholds;
  if (thresholds.empty()) thresholds.assign(spec.urns, 1);
  if (static_cast<int>(thresholds.size()) != spec.urns) {
    fail(ErrorCode::InvalidDistribution, "need exactly one threshold per urn");
  }
  Rat total = 0;
  for (const Rat& q : spec.p) {
    if (q < 0) {
      fail(ErrorCode::InvalidDistribution, "urn probabilities must be nonnegative");
    }
    total += q;
  }
  if (total != 1) {
    fail(ErrorCode::InvalidDistribution,
         "urn probabilities must sum to 1; got " + format_rational(total));
  }
  for (long a : thresholds) {
    if (a < 1) fail(ErrorCode::InvalidDistribution, "thresholds must be >= 1");
  }

  const int n = spec.urns;
  const int m = spec.balls;
  std::vector<Rat> inv_fact(m + 1, Rat(1));
  for (int c = 1; c <= m; ++c) inv_fact[c] = inv_fact[c - 1] / Rat(c);

  // dp[used][mask]: sum over ball counts (c_0..c_{j-1}) consistent with the
  // indicator mask of the urns processed so far, of prod p_i^{c_i} / c_i!.
  const Config slots = Config(1) << n;
  std::vector<std::vector<Rat>> dp(m + 1, std::vector<Rat>(slots, Rat(0)));
  dp[0][0] = 1;
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<Rat>> next(m + 1, std::vector<Rat>(slots, Rat(0)));
    std::vector<Rat> powers(m + 1, Rat(1));
    for (int c = 1; c <= m; ++c) powers[c] = powers[c - 1] * spec.p[j];
    const Config seen = Config(1) << j;
    for (int used = 0; used <= m; ++used) {
      for (Config mask = 0; mask < seen; ++mask) {
        if (dp[used][mask] == 0) continue;
        for (int c = 0; used + c <= m; ++c) {
          if (c > 0 && spec.p[j] == 0) break;
          const Rat term = dp[used][mask] * powers[c] * inv_fact[c];
          const Config bit = (c >= thresholds[j]) ? seen : Config(0);
          next[used + c][mask | bit] += term;
        }
      }
    }
    dp = std::move(next);
  }

  Rat m_fact = 1;
  for (int c = 2; c <= m; ++c) m_fact *= c;
  std::vector<Rat> w(slots, Rat(0));
  for (Config mask = 0; mask < slots; ++mask) w[mask] = dp[m][mask] * m_fact;
  return Measure(n, std::move(w),
                 "urn(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")");
}

std::vector<Rat> urn_rank_sequence(int balls, const std::vector<UrnClass>& classes) {
  if (balls < 0) fail(ErrorCode::ParameterOutOfRange, "ball count must be nonnegative");
  Rat total = 0;
  for (const UrnClass& cls : classes) {
    if (cls.count < 0) {
      fail(ErrorCode::ParameterOutOfRange, "class sizes must be nonnegative");
    }
    if (cls.p < 0) {
      fail(ErrorCode::InvalidDistribution, "urn probabilities must be nonnegative");
    }
    if (cls.threshold < 1) {
      fail(ErrorCode::InvalidDistribution, "thresholds must be >= 1");
    }
    total += Rat(cls.count) * cls.p;
  }
  if (total != 1) {
    fail(ErrorCode::InvalidDistribution,
         "urn probabilities must sum to 1; got " + format_rational(total));
  }

  const int m = balls;
  std::vector<Rat> inv_fact(m + 1, Rat(1));
  for (int c = 1; c <= m; ++c) inv_fact[c] = inv_fact[c - 1] / Rat(c);

  // dp[used][r]: sum over ball counts for the urns processed so far that
  // leave exactly r urns at or above their threshold, of prod p^{c}/c!.
  std::vector<std::vector<Rat>> dp(m + 1, std::vector<Rat>(m + 1, Rat(0)));
  dp[0][0] = 1;
  for (const UrnClass& cls : classes) {
    if (cls.p == 0) continue;  // urns that never receive a ball never fire
    std::vector<Rat> powers(m + 1, Rat(1));
    for (int c = 1; c <= m; ++c) powers[c] = powers[c - 1] * cls.p;
    for (long rep = 0; rep < cls.count; ++rep) {
      std::vector<std::vector<Rat>> next(m + 1, std::vector<Rat>(m + 1, Rat(0)));
      for (int used = 0; used <= m; ++used) {
        for (int r = 0; r <= used; ++r) {
          if (dp[used][r] == 0) continue;
          for (int c = 0; used + c <= m; ++c) {
            if (c > 0 && cls.p == 0) break;
            const int nr = r + (c >= cls.threshold ? 1 : 0);
            next[used + c][nr] += dp[used][r] * powers[c] * inv_fact[c];
          }
        }
      }
      dp = std::move(next);
    }
  }

  Rat m_fact = 1;
  for (int c = 2; c <= m; ++c) m_fact *= c;
  std::vector<Rat> out(m + 1, Rat(0));
  for (int r = 0; r <= m; ++r) out[r] = dp[m][r] * m_fact;
  return out;
}

Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) {
    fail(ErrorCode::Parse, "graph needs \"vertices\" and \"edges\"");
  }
  Graph g;
  std::map<std::string, int> index;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_string()) fail(ErrorCode::Parse, "vertex names must be strings");
    const std::string name = v.get<std::string>();
    if (index.count(name)) {
      fail(ErrorCode::Parse, "duplicate vertex name '" + name + "'");
    }
    index[name] = static_cast<int>(g.vertices.size());
    g.vertices.push_back(name);
  }
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) {
      fail(ErrorCode::Parse, "edges must be [u, v] or [u, v, weight]");
    }
    Graph::Edge edge;
    for (int side = 0; side < 2; ++side) {
      if (!e[side].is_string()) {
        fail(ErrorCode::Parse, "edge endpoints must be vertex names");
      }
      const std::string name = e[side].get<std::string>();
      const auto it = index.find(name);
      if (it == index.end()) {
        fail(ErrorCode::Parse, "unknown vertex '" + name + "' in edge list");
      }
      (side == 0 ? edge.u : edge.v) = it->second;
    }
    if (e.size() == 3) {
      if (!e[2].is_string()) {
        fail(ErrorCode::Parse, "edge weights must be rational strings");
      }
      edge.w = parse_rational(e[2].get<std::string>());
      if (edge.w <= 0) {
        fail(ErrorCode::InvalidDistribution, "edge weights must be positive");
      }
    }
    g.edges.push_back(std::move(edge));
  }
  return g;
}

nlohmann::json graph_to_json(const Graph& g) {
  validate_graph_weights(g);
  nlohmann::json j;
  j["vertices"] = g.vertices;
  nlohmann::json edges = nlohmann::json::array();
  for (const Graph::Edge& e : g.edges) {
    nlohmann::json row = nlohmann::json::array();
    row.push_back(g.vertices[e.u]);
    row.push_back(g.vertices[e.v]);
    if (e.w != 1) row.push_back(format_rational(e.w));
    edges.push_back(std::move(row));
  }
  j["edges"] = std::move(edges);
  return j;
}

bool graph_connected(const Graph& g) {
  const int v = static_cast<int>(g.vertices.size());
  if (v <= 1) return true;
  DisjointSets ds(v);
  int components = v;
  for (const Graph::Edge& e : g.edges) {
    if (ds.join(e.u, e.v)) --components;
  }
  return components == 1;
}

Graph gadget_graph(int k) {
  if (k < 1) fail(ErrorCode::ParameterOutOfRange, "gadget needs k >= 1");
  Graph g;
  g.vertices.push_back("x");
  g.vertices.push_back("y");
  for (int i = 1; i <= k; ++i) g.vertices.push_back("z" + std::to_string(i));
  g.edges.push_back({0, 1, Rat(1)});
  for (int i = 0; i < k; ++i) g.edges.push_back({0, 2 + i, Rat(1)});
  for (int i = 0; i < k; ++i) g.edges.push_back({1, 2 + i, Rat(1)});
  return g;
}

Measure spanning_forest_measure(const Graph& g) {
  const int n = static_cast<int>(g.edges.size());
  require_coord_cap(n, "forest measure");
  validate_graph_weights(g);
  std::vector<Rat> w(Config(1) << n, Rat(0));
  for (Config subset = 0; subset < (Config(1) << n); ++subset) {
    if (subset_acyclic(g, subset)) w[subset] = subset_weight(g, subset);
  }
  return Measure(n, std::move(w), "forests(" + std::to_string(n) + " edges)");
}

Measure spanning_tree_measure(const Graph& g) {
  const int n = static_cast<int>(g.edges.size());
  require_coord_cap(n, "tree measure");
  validate_graph_weights(g);
  if (!graph_connected(g)) {
    fail(ErrorCode::Disconnected, "tree measure needs a connected graph");
  }
  const int target = static_cast<int>(g.vertices.size()) - 1;
  std::vector<Rat> w(Config(1) << n, Rat(0));
  for (Config subset = 0; subset < (Config(1) << n); ++subset) {
    if (popcount(subset) != target) continue;
    if (subset_acyclic(g, subset)) w[subset] = subset_weight(g, subset);
  }
  return Measure(n, std::move(w), "trees(" + std::to_string(n) + " edges)");
}

Matroid make_matroid(int ground, std::vector<Config> independent) {
  if (ground < 0) fail(ErrorCode::ParameterOutOfRange, "ground size must be nonnegative");
  if (ground > kMaxCoords) {
    fail(ErrorCode::CapExceeded, "ground sets are capped at " +
                                     std::to_string(kMaxCoords) + " elements");
  }
  std::sort(independent.begin(), independent.end());
  independent.erase(std::unique(independent.begin(), independent.end()),
                    independent.end());
  if (independent.empty()) {
    fail(ErrorCode::PreconditionViolated,
         "independence system must contain the empty set");
  }
  const Config limit = Config(1) << ground;
  for (Config c : independent) {
    if (c >= limit) {
      fail(ErrorCode::ParameterOutOfRange,
           "independent set mentions elements outside the ground set");
    }
  }
  const auto is_independent = [&](Config c) {
    return std::binary_search(independent.begin(), independent.end(), c);
  };
  if (!is_independent(0)) {
    fail(ErrorCode::PreconditionViolated,
         "independence system must contain the empty set");
  }
  for (Config c : independent) {
    for (int e = 0; e < ground; ++e) {
      if (!(c >> e & 1)) continue;
      if (!is_independent(c ^ (Config(1) << e))) {
        fail(ErrorCode::PreconditionViolated,
             "independence system is not downward closed at " +
                 config_to_bitstring(c, ground));
      }
    }
  }
  if (ground <= 12) {
    for (Config small : independent) {
      for (Config big : independent) {
        if (popcount(big) <= popcount(small)) continue;
        bool extended = false;
        for (int e = 0; e < ground && !extended; ++e) {
          if ((big >> e & 1) && !(small >> e & 1) &&
              is_independent(small | (Config(1) << e))) {
            extended = true;
          }
        }
        if (!extended) {
          fail(ErrorCode::PreconditionViolated,
               "exchange property fails for " +
                   config_to_bitstring(small, ground) + " against " +
                   config_to_bitstring(big, ground));
        }
      }
    }
  }
  Matroid m;
  m.ground = ground;
  m.independent = std::move(independent);
  return m;
}

Matroid matroid_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("ground") || !j.contains("independent")) {
    fail(ErrorCode::Parse, "matroid needs \"ground\" and \"independent\"");
  }
  if (!j.at("ground").is_number_integer()) {
    fail(ErrorCode::Parse, "\"ground\" must be an integer");
  }
  const int ground = j.at("ground").get<int>();
  if (ground < 0 || ground > kMaxCoords) {
    fail(ErrorCode::CapExceeded, "ground sets are capped at " +
                                     std::to_string(kMaxCoords) + " elements");
  }
  std::vector<Config> sets;
  for (const auto& s : j.at("independent")) {
    if (!s.is_string()) {
      fail(ErrorCode::Parse, "independent sets must be bitstrings");
    }
    sets.push_back(config_from_bitstring(s.get<std::string>(), ground));
  }
  return make_matroid(ground, std::move(sets));
}

nlohmann::json matroid_to_json(const Matroid& m) {
  nlohmann::json j;
  j["ground"] = m.ground;
  j["independent"] = bitstring_list(m.independent, m.ground);
  return j;
}

Matroid graphic_matroid(const Graph& g) {
  const int n = static_cast<int>(g.edges.size());
  if (n > kMaxCoords) {
    fail(ErrorCode::CapExceeded, "ground sets are capped at " +
                                     std::to_string(kMaxCoords) + " elements");
  }
  // Forests form an exchange system by construction, so no axiom check here.
  Matroid m;
  m.ground = n;
  for (Config subset = 0; subset < (Config(1) << n); ++subset) {
    if (subset_acyclic(g, subset)) m.independent.push_back(subset);
  }
  return m;
}

std::vector<Int> independence_numbers(const Matroid& m) {
  std::vector<Int> a(m.ground + 1, Int(0));
  for (Config c : m.independent) a[popcount(c)] += 1;
  return a;
}

Measure matroid_measure(const Matroid& m, const std::vector<Rat>& weights) {
  require_coord_cap(m.ground, "independence measure");
  std::vector<Rat> w_elem = weights;
  if (w_elem.empty()) w_elem.assign(m.ground, Rat(1));
  if (static_cast<int>(w_elem.size()) != m.ground) {
    fail(ErrorCode::InvalidDistribution,
         "need exactly one weight per ground element");
  }
  for (const Rat& q : w_elem) {
    if (q <= 0) {
      fail(ErrorCode::InvalidDistribution, "element weights must be positive");
    }
  }
  std::vector<Rat> w(Config(1) << m.ground, Rat(0));
  for (Config c : m.independent) {
    Rat prod = 1;
    for (int e = 0; e < m.ground; ++e) {
      if (c >> e & 1) prod *= w_elem[e];
    }
    w[c] = prod;
  }
  return Measure(m.ground, std::move(w),
                 "independent-sets(" + std::to_string(m.ground) + " elements)");
}

Verdict mason_check(const Matroid& m) {
  const std::vector<Int> counts = independence_numbers(m);
  std::vector<Rat> seq;
  seq.reserve(counts.size());
  for (const Int& c : counts) seq.push_back(Rat(c));
  Verdict v = check_ULC_sequence(seq);
  nlohmann::json numbers = nlohmann::json::array();
  for (const Int& c : counts) numbers.push_back(c.get_str());
  v.detail["independence_numbers"] = std::move(numbers);
  return v;
}

Verdict dowling_app_check(const Matroid& m) {
  if (m.ground % 2 != 0) {
    fail(ErrorCode::OddGroundSet,
         "antipodal-pair comparison needs an even ground set");
  }
  if (m.ground > 10) {
    fail(ErrorCode::CapExceeded,
         "antipodal-pair comparison is capped at 10 ground elements");
  }
  if (m.ground < 2) {
    fail(ErrorCode::ParameterOutOfRange,
         "antipodal-pair comparison needs at least 2 ground elements");
  }
  return check_APP(matroid_measure(m));
}

}  // namespace negdep
