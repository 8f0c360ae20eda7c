#include "negdep/dominance.hpp"

#include <algorithm>
#include <queue>

#include "negdep/checks.hpp"
#include "negdep/errors.hpp"
#include "negdep/measure_io.hpp"

namespace negdep {

namespace {

constexpr int kFlowCap = 12;

// Exact max-flow (Dinic) over arbitrary-precision capacities.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : adj_(nodes) {}

  void add_edge(int u, int v, Int cap) {
    adj_[u].push_back({v, static_cast<int>(adj_[v].size()), std::move(cap)});
    adj_[v].push_back({u, static_cast<int>(adj_[u].size()) - 1, Int(0)});
  }

  Int max_flow(int s, int t) {
    Int flow = 0;
    while (bfs(s, t)) {
      iter_.assign(adj_.size(), 0);
      for (;;) {
        Int pushed = dfs(s, t, Int(-1));
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  // Nodes reachable from s in the residual graph (call after max_flow).
  std::vector<bool> residual_reachable(int s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::queue<int> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Edge& e : adj_[u]) {
        if (e.cap > 0 && !seen[e.to]) {
          seen[e.to] = true;
          q.push(e.to);
        }
      }
    }
    return seen;
  }

  // Flow pushed through the edge added as the k-th outgoing edge of u.
  Int edge_flow(int u, int index) const {
    const Edge& e = adj_[u][index];
    return adj_[e.to][e.rev].cap;  // reverse capacity equals the flow
  }

  int out_degree(int u) const { return static_cast<int>(adj_[u].size()); }

 private:
  struct Edge {
    int to, rev;
    Int cap;
  };

  bool bfs(int s, int t) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Edge& e : adj_[u]) {
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  Int dfs(int u, int t, Int limit) {
    if (u == t) return limit;
    for (int& i = iter_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      Edge& e = adj_[u][i];
      if (e.cap <= 0 || level_[e.to] != level_[u] + 1) continue;
      Int pass = (limit < 0 || e.cap < limit) ? e.cap : limit;
      Int pushed = dfs(e.to, t, std::move(pass));
      if (pushed > 0) {
        e.cap -= pushed;
        adj_[e.to][adj_[u][i].rev].cap += pushed;
        return pushed;
      }
    }
    return Int(0);
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

bool covers_or_equal(Config a, Config b) {
  return (a & b) == b && popcount(a ^ b) <= 1;
}

bool contains(Config a, Config b) { return (a & b) == b; }

nlohmann::json configs_json(const std::vector<Config>& cs, int n) {
  nlohmann::json a = nlohmann::json::array();
  for (Config c : cs) a.push_back(config_to_bitstring(c, n));
  return a;
}

std::string exact_str(Rat q) {
  q.canonicalize();
  return format_rational(q);
}

// Shared feasibility engine. `related(upper, lower)` defines the permitted
// coupling support. On failure `violation` holds the deficient lower-side
// set B, its relation neighborhood, and both exact masses.
DominanceResult couple(const Measure& mu, const Measure& nu,
                       bool (*related)(Config, Config)) {
  if (mu.coords() != nu.coords()) {
    fail(ErrorCode::DimensionMismatch,
         "coupled measures need equal coordinate counts");
  }
  const int n = mu.coords();
  if (n > kFlowCap) {
    fail(ErrorCode::CapExceeded,
         "coupling feasibility capped at n <= " + std::to_string(kFlowCap));
  }
  ClearedMeasure a = ClearedMeasure::of(mu);
  ClearedMeasure b = ClearedMeasure::of(nu);
  if (a.total == 0 || b.total == 0) {
    fail(ErrorCode::ZeroMass, "coupling needs positive total mass");
  }
  // Put both sides on the common integer scale a.total * b.total.
  std::vector<Config> supA, supB;
  for (Config c = 0; c < (Config(1) << n); ++c) {
    if (a.w[c] != 0) supA.push_back(c);
    if (b.w[c] != 0) supB.push_back(c);
  }
  const Int scale = a.total * b.total;
  const int s = 0;
  const int t = static_cast<int>(supA.size() + supB.size()) + 1;
  FlowNetwork net(t + 1);
  auto aNode = [&](std::size_t x) { return static_cast<int>(x) + 1; };
  auto bNode = [&](std::size_t y) {
    return static_cast<int>(supA.size() + y) + 1;
  };
  for (std::size_t x = 0; x < supA.size(); ++x) {
    net.add_edge(s, aNode(x), a.w[supA[x]] * b.total);
  }
  for (std::size_t y = 0; y < supB.size(); ++y) {
    net.add_edge(bNode(y), t, b.w[supB[y]] * a.total);
  }
  // Relation arcs never saturate (capacity above any feasible flow), so the
  // residual cut analysis below stays valid.
  std::vector<std::vector<std::pair<std::size_t, int>>> arcIndex(supA.size());
  for (std::size_t x = 0; x < supA.size(); ++x) {
    for (std::size_t y = 0; y < supB.size(); ++y) {
      if (related(supA[x], supB[y])) {
        arcIndex[x].push_back({y, net.out_degree(aNode(x))});
        net.add_edge(aNode(x), bNode(y), scale + 1);
      }
    }
  }
  Int flow = net.max_flow(s, t);
  DominanceResult res;
  if (flow == scale) {
    res.dominates = true;
    Coupling coup;
    coup.n = n;
    for (std::size_t x = 0; x < supA.size(); ++x) {
      for (const auto& [y, index] : arcIndex[x]) {
        Int f = net.edge_flow(aNode(x), index);
        if (f != 0) {
          Rat w(f, scale);
          w.canonicalize();
          coup.entries.emplace_back(supA[x], supB[y], std::move(w));
        }
      }
    }
    res.coupling = std::move(coup);
    return res;
  }
  // Deficient set: lower-side nodes unreachable in the residual graph. Its
  // relation neighborhood has strictly smaller upper-side mass.
  std::vector<bool> seen = net.residual_reachable(s);
  std::vector<Config> deficient, neighborhood;
  Int bMass = 0, aMass = 0;
  for (std::size_t y = 0; y < supB.size(); ++y) {
    if (!seen[bNode(y)]) {
      deficient.push_back(supB[y]);
      bMass += b.w[supB[y]];
    }
  }
  for (std::size_t x = 0; x < supA.size(); ++x) {
    bool hits = false;
    for (Config z : deficient) {
      if (related(supA[x], z)) {
        hits = true;
        break;
      }
    }
    if (hits) {
      neighborhood.push_back(supA[x]);
      aMass += a.w[supA[x]];
    }
  }
  Rat lower(bMass, b.total), upper(aMass, a.total);
  res.violation =
      nlohmann::json{{"kind", "deficient-set"},
                     {"set", configs_json(deficient, n)},
                     {"neighborhood", configs_json(neighborhood, n)},
                     {"lower_mass", exact_str(lower)},
                     {"upper_neighborhood_mass", exact_str(upper)}};
  return res;
}

// Minimal elements of the up-closure of `gens` (antichain generators).
std::vector<Config> minimal_elements(std::vector<Config> gens) {
  std::vector<Config> out;
  for (Config g : gens) {
    bool redundant = false;
    for (Config h : gens) {
      if (h != g && contains(g, h)) {
        redundant = true;
        break;
      }
    }
    if (!redundant) out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

nlohmann::json Coupling::to_json() const {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [upper, lower, w] : entries) {
    a.push_back({{"upper", config_to_bitstring(upper, n)},
                 {"lower", config_to_bitstring(lower, n)},
                 {"w", exact_str(w)}});
  }
  return nlohmann::json{{"n", n}, {"entries", std::move(a)}};
}

DominanceResult stochastic_dominates(const Measure& mu, const Measure& nu) {
  DominanceResult res = couple(mu, nu, contains);
  if (res.dominates) return res;
  // Convert the deficient set into the increasing event it generates:
  // mu(U) <= upper neighborhood mass < nu(deficient) <= nu(U).
  const int n = mu.coords();
  std::vector<Config> gens;
  for (const auto& item : res.violation.at("set")) {
    gens.push_back(config_from_bitstring(item.get<std::string>(), n));
  }
  std::vector<Config> mins = minimal_elements(std::move(gens));
  Rat mu_mass = 0, nu_mass = 0;
  Rat ta = mu.total_mass(), tb = nu.total_mass();
  for (Config c = 0; c < (Config(1) << n); ++c) {
    bool in_upset = false;
    for (Config g : mins) {
      if (contains(c, g)) {
        in_upset = true;
        break;
      }
    }
    if (in_upset) {
      mu_mass += mu.weight(c) / ta;
      nu_mass += nu.weight(c) / tb;
    }
  }
  res.violation = nlohmann::json{{"kind", "up-set"},
                                 {"generators", configs_json(mins, n)},
                                 {"mu_mass", exact_str(mu_mass)},
                                 {"nu_mass", exact_str(nu_mass)}};
  return res;
}

DominanceResult stochastically_covers(const Measure& mu, const Measure& nu) {
  return couple(mu, nu, covers_or_equal);
}

Verdict check_NMP(const Measure& m) {
  const int n = m.coords();
  if (n > kFlowCap) {
    fail(ErrorCode::CapExceeded,
         "level dominance scan capped at n <= " + std::to_string(kFlowCap));
  }
  ClearedMeasure cm = ClearedMeasure::of(m);
  if (cm.total == 0) fail(ErrorCode::ZeroMass, "measure has zero total mass");
  std::vector<Int> level_mass(n + 1, Int(0));
  for (Config c = 0; c < (Config(1) << n); ++c) level_mass[popcount(c)] += cm.w[c];
  std::vector<int> defined;
  for (int l = 0; l <= n; ++l) {
    if (level_mass[l] != 0) defined.push_back(l);
  }
  auto level_measure = [&](int l) {
    std::vector<Rat> w(std::size_t(1) << n, Rat(0));
    for (Config c = 0; c < (Config(1) << n); ++c) {
      if (popcount(c) == l && cm.w[c] != 0) w[c] = Rat(cm.w[c], level_mass[l]);
    }
    return Measure(n, std::move(w), "");
  };
  long pairs = 0;
  for (std::size_t b = 0; b < defined.size(); ++b) {
    for (std::size_t a = b + 1; a < defined.size(); ++a) {
      const int l = defined[a], k = defined[b];
      DominanceResult r = stochastic_dominates(level_measure(l), level_measure(k));
      ++pairs;
      if (!r.dominates) {
        nlohmann::json w = r.violation;
        w["l"] = l;
        w["k"] = k;
        return Verdict::fails("level-dominance", std::move(w));
      }
    }
  }
  return Verdict::holds("level-dominance", {{"pairs", pairs}});
}

Verdict check_SCP(const Measure& m) {
  const int n = m.coords();
  if (n > kFlowCap) {
    fail(ErrorCode::CapExceeded,
         "covering scan capped at n <= " + std::to_string(kFlowCap));
  }
  if (n < 2) {
    return Verdict::holds("conditional-covering", {{"coordinates", 0}});
  }
  ClearedMeasure cm = ClearedMeasure::of(m);
  if (cm.total == 0) fail(ErrorCode::ZeroMass, "measure has zero total mass");
  long tested = 0;
  for (int i = 0; i < n; ++i) {
    Int mass1 = 0;
    for (Config c = 0; c < (Config(1) << n); ++c) {
      if (c >> i & 1) mass1 += cm.w[c];
    }
    if (mass1 == 0 || mass1 == cm.total) continue;  // a side is undefined
    Assignment a0, a1;
    a0.fix(i, 0);
    a1.fix(i, 1);
    Relabeled side0 = condition(m, a0);
    Relabeled side1 = condition(m, a1);
    DominanceResult r = stochastically_covers(side0.measure, side1.measure);
    ++tested;
    if (!r.dominates) {
      nlohmann::json w = r.violation;
      w["coordinate"] = i + 1;
      return Verdict::fails("conditional-covering", std::move(w));
    }
  }
  return Verdict::holds("conditional-covering", {{"coordinates", tested}});
}

}  // namespace negdep
