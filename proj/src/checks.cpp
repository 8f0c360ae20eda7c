#include "negdep/checks.hpp"

#include <algorithm>

#include "negdep/errors.hpp"
#include "negdep/events.hpp"
#include "negdep/measure_io.hpp"
#include "negdep/rng.hpp"

namespace negdep {

namespace {

constexpr int kConditioningCap = 12;
constexpr int kLatticeCap = 12;
constexpr int kEventCap = 6;

std::string ratio_str(const Int& v, const Int& d) {
  Rat q(v, d);
  q.canonicalize();
  return format_rational(q);
}

std::string ratio_str(const Int& v1, const Int& v2, const Int& d) {
  Rat q(v1 * v2, d * d);
  q.canonicalize();
  return format_rational(q);
}

nlohmann::json assignment_json(Config fixed_mask, Config fixed_values, int n) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    if (fixed_mask >> i & 1) {
      a.push_back({{"coord", i + 1}, {"value", int(fixed_values >> i & 1)}});
    }
  }
  return a;
}

// Subsets of [n] ordered by size, then numerically; the canonical
// conditioning order (smallest assignments first).
std::vector<Config> subsets_by_size(int n) {
  std::vector<Config> subs(std::size_t(1) << n);
  for (Config s = 0; s < (Config(1) << n); ++s) subs[s] = s;
  std::stable_sort(subs.begin(), subs.end(), [](Config a, Config b) {
    return popcount(a) < popcount(b);
  });
  return subs;
}

void require_mass(const ClearedMeasure& cm) {
  if (cm.total == 0) fail(ErrorCode::ZeroMass, "measure has zero total mass");
}

}  // namespace

ClearedMeasure ClearedMeasure::of(const Measure& m) {
  ClearedMeasure cm;
  cm.n = m.coords();
  cm.denom = common_denominator(m.weights());
  cm.w.reserve(m.weights().size());
  for (const Rat& q : m.weights()) {
    Rat scaled = q * cm.denom;
    cm.w.push_back(scaled.get_num());
    cm.total += cm.w.back();
  }
  return cm;
}

PartialSumTable::PartialSumTable(int n, std::span<const Int> weights) : n_(n) {
  p3_.resize(n + 1);
  p3_[0] = 1;
  for (int k = 1; k <= n; ++k) p3_[k] = p3_[k - 1] * 3;
  t_.assign(p3_[n], Int(0));
  std::vector<int> digit(n);
  for (std::size_t code = 0; code < p3_[n]; ++code) {
    std::size_t rest = code;
    int top_free = -1;
    Config mask = 0;
    for (int i = 0; i < n; ++i) {
      digit[i] = static_cast<int>(rest % 3);
      rest /= 3;
      if (digit[i] == 2) {
        top_free = i;
      } else if (digit[i] == 1) {
        mask |= Config(1) << i;
      }
    }
    if (top_free < 0) {
      t_[code] = weights[mask];
    } else {
      // Both children fix the top free coordinate, so they have smaller
      // codes and are already filled.
      t_[code] = t_[code - 2 * p3_[top_free]] + t_[code - p3_[top_free]];
    }
  }
}

std::size_t pair_index(int n, int i, int j) {
  return std::size_t(i) * (2 * n - i - 1) / 2 + (j - i - 1);
}

PairSums pair_sums(int n, std::span<const Int> weights) {
  PairSums ps;
  ps.s11.assign(std::size_t(n) * (n - 1) / 2, Int(0));
  ps.single.assign(n, Int(0));
  ps.total = 0;
  std::vector<int> bits;
  bits.reserve(n);
  for (Config c = 0; c < (Config(1) << n); ++c) {
    const Int& w = weights[c];
    ps.total += w;
    if (w == 0) continue;
    bits.clear();
    for (int i = 0; i < n; ++i) {
      if (c >> i & 1) bits.push_back(i);
    }
    for (std::size_t x = 0; x < bits.size(); ++x) {
      ps.single[bits[x]] += w;
      for (std::size_t y = x + 1; y < bits.size(); ++y) {
        ps.s11[pair_index(n, bits[x], bits[y])] += w;
      }
    }
  }
  return ps;
}

namespace {

// First pair (lex order) with s11*s00 > s10*s01, if any.
struct PairViolation {
  int i, j;
  Int s11, s10, s01, s00;
};

std::optional<PairViolation> nc_violation(int n, const PairSums& ps) {
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Int& s11 = ps.s11[pair_index(n, i, j)];
      Int s10 = ps.single[i] - s11;
      Int s01 = ps.single[j] - s11;
      Int s00 = ps.total - ps.single[i] - ps.single[j] + s11;
      if (s11 * s00 > s10 * s01) {
        return PairViolation{i, j, s11, std::move(s10), std::move(s01),
                             std::move(s00)};
      }
    }
  }
  return std::nullopt;
}

nlohmann::json pair_witness(const PairViolation& v, const Int& denom,
                            nlohmann::json assignment) {
  return nlohmann::json{{"kind", "conditional-pair"},
                        {"assignment", std::move(assignment)},
                        {"i", v.i + 1},
                        {"j", v.j + 1},
                        {"s11", ratio_str(v.s11, denom)},
                        {"s10", ratio_str(v.s10, denom)},
                        {"s01", ratio_str(v.s01, denom)},
                        {"s00", ratio_str(v.s00, denom)},
                        {"lhs", ratio_str(v.s11, v.s00, denom)},
                        {"rhs", ratio_str(v.s10, v.s01, denom)}};
}

}  // namespace

Verdict check_NC(const Measure& m) {
  ClearedMeasure cm = ClearedMeasure::of(m);
  require_mass(cm);
  PairSums ps = pair_sums(cm.n, cm.w);
  if (auto v = nc_violation(cm.n, ps)) {
    return Verdict::fails("pair-scan",
                          pair_witness(*v, cm.denom, nlohmann::json::array()));
  }
  return Verdict::holds("pair-scan",
                        {{"pairs", cm.n * (cm.n - 1) / 2}});
}

namespace {

Verdict lattice_scan(const Measure& m, bool negative) {
  ClearedMeasure cm = ClearedMeasure::of(m);
  require_mass(cm);
  if (cm.n > kLatticeCap) {
    fail(ErrorCode::CapExceeded, "lattice scan capped at n <= " +
                                     std::to_string(kLatticeCap));
  }
  const Config total = Config(1) << cm.n;
  for (Config a = 0; a < total; ++a) {
    for (Config b = a + 1; b < total; ++b) {
      if ((a & b) == a || (a & b) == b) continue;  // comparable: equality
      const Int& lhs = cm.w[a];
      const Int& rhs = cm.w[b];
      Int pair = lhs * rhs;
      Int ends = cm.w[a & b] * cm.w[a | b];
      const bool bad = negative ? pair < ends : pair > ends;
      if (bad) {
        return Verdict::fails(
            "lattice-scan",
            {{"kind", "lattice-pair"},
             {"eta", config_to_bitstring(a, cm.n)},
             {"tau", config_to_bitstring(b, cm.n)},
             {"product", ratio_str(cm.w[a], cm.w[b], cm.denom)},
             {"meet_join_product",
              ratio_str(cm.w[a & b], cm.w[a | b], cm.denom)}});
      }
    }
  }
  return Verdict::holds("lattice-scan");
}

}  // namespace

Verdict check_PLC(const Measure& m) { return lattice_scan(m, false); }

Verdict check_NLC(const Measure& m) { return lattice_scan(m, true); }

Verdict check_hNLC(const Measure& m) {
  ClearedMeasure cm = ClearedMeasure::of(m);
  require_mass(cm);
  if (cm.n > kLatticeCap) {
    fail(ErrorCode::CapExceeded, "projection lattice scan capped at n <= " +
                                     std::to_string(kLatticeCap));
  }
  PartialSumTable table(cm.n, cm.w);
  std::vector<Rat> pw;
  for (Config jmask = 1; jmask < (Config(1) << cm.n); ++jmask) {
    std::vector<int> coords;
    for (int i = 0; i < cm.n; ++i) {
      if (jmask >> i & 1) coords.push_back(i);
    }
    const int k = static_cast<int>(coords.size());
    // Projection weights are partial-sum entries: J fixed, the rest free.
    std::size_t base = 0;
    for (int i = 0; i < cm.n; ++i) {
      if (!(jmask >> i & 1)) base += 2 * table.pow3(i);
    }
    std::vector<const Int*> w(std::size_t(1) << k);
    for (Config sub = 0; sub < (Config(1) << k); ++sub) {
      std::size_t code = base;
      for (int x = 0; x < k; ++x) {
        if (sub >> x & 1) code += table.pow3(coords[x]);
      }
      w[sub] = &table.at(code);
    }
    for (Config a = 0; a < (Config(1) << k); ++a) {
      for (Config b = a + 1; b < (Config(1) << k); ++b) {
        if ((a & b) == a || (a & b) == b) continue;
        Int pair = *w[a] * *w[b];
        Int ends = *w[a & b] * *w[a | b];
        if (pair < ends) {
          nlohmann::json proj = nlohmann::json::array();
          for (int c : coords) proj.push_back(c + 1);
          return Verdict::fails(
              "projection-lattice-scan",
              {{"kind", "projected-lattice-pair"},
               {"projection", std::move(proj)},
               {"eta", config_to_bitstring(a, k)},
               {"tau", config_to_bitstring(b, k)},
               {"product", ratio_str(*w[a], *w[b], cm.denom)},
               {"meet_join_product", ratio_str(*w[a & b], *w[a | b], cm.denom)}});
        }
      }
    }
  }
  return Verdict::holds("projection-lattice-scan");
}

Verdict check_CNC(const Measure& m) {
  ClearedMeasure cm = ClearedMeasure::of(m);
  require_mass(cm);
  if (cm.n > kConditioningCap) {
    fail(ErrorCode::CapExceeded, "conditioning scan capped at n <= " +
                                     std::to_string(kConditioningCap));
  }
  const int n = cm.n;
  PartialSumTable table(n, cm.w);
  std::size_t all_free = 0;
  for (int i = 0; i < n; ++i) all_free += 2 * table.pow3(i);
  long long assignments_checked = 0;
  for (Config fixset : subsets_by_size(n)) {
    if (popcount(fixset) > n - 2) continue;
    std::vector<int> fixed, free_coords;
    for (int i = 0; i < n; ++i) {
      if (fixset >> i & 1) {
        fixed.push_back(i);
      } else {
        free_coords.push_back(i);
      }
    }
    const int t = static_cast<int>(fixed.size());
    for (Config values = 0; values < (Config(1) << t); ++values) {
      std::size_t base = all_free;
      Config value_mask = 0;
      for (int x = 0; x < t; ++x) {
        const int bit = values >> x & 1;
        base -= (2 - bit) * table.pow3(fixed[x]);
        if (bit) value_mask |= Config(1) << fixed[x];
      }
      if (table.at(base) == 0) continue;  // zero-probability branch
      ++assignments_checked;
      for (std::size_t x = 0; x < free_coords.size(); ++x) {
        for (std::size_t y = x + 1; y < free_coords.size(); ++y) {
          const int i = free_coords[x], j = free_coords[y];
          const std::size_t no_ij =
              base - 2 * table.pow3(i) - 2 * table.pow3(j);
          const Int& s00 = table.at(no_ij);
          const Int& s10 = table.at(no_ij + table.pow3(i));
          const Int& s01 = table.at(no_ij + table.pow3(j));
          const Int& s11 = table.at(no_ij + table.pow3(i) + table.pow3(j));
          if (s11 * s00 > s10 * s01) {
            PairViolation v{i, j, s11, s10, s01, s00};
            return Verdict::fails(
                "conditioning-scan",
                pair_witness(v, cm.denom,
                             assignment_json(fixset, value_mask, n)));
          }
        }
      }
    }
  }
  return Verdict::holds("conditioning-scan",
                        {{"assignments", assignments_checked}});
}

// One negative-association scan over integer weights. Returns the witness
// JSON of the first violating disjointly affecting pair, if any.
std::optional<nlohmann::json> na_violation(int n, std::span<const Int> w,
                                           const Int& denom) {
  Int total = 0;
  for (Config c = 0; c < (Config(1) << n); ++c) total += w[c];
  if (n < 2) return std::nullopt;
  for (Config imask = 1; imask < (Config(1) << n) - 1; ++imask) {
    std::vector<int> I, J;
    for (int i = 0; i < n; ++i) {
      if (imask >> i & 1) {
        I.push_back(i);
      } else {
        J.push_back(i);
      }
    }
    const int ki = static_cast<int>(I.size());
    const int kj = static_cast<int>(J.size());
    // Reshaped weights: joint[x][y] with x over the I-cube, y over the J-cube.
    std::vector<Int> joint(std::size_t(1) << n, Int(0));
    std::vector<Int> rowsum(std::size_t(1) << ki, Int(0));
    std::vector<Int> colsum(std::size_t(1) << kj, Int(0));
    for (Config c = 0; c < (Config(1) << n); ++c) {
      if (w[c] == 0) continue;
      Config x = 0, y = 0;
      for (int a = 0; a < ki; ++a) {
        if (c >> I[a] & 1) x |= Config(1) << a;
      }
      for (int b = 0; b < kj; ++b) {
        if (c >> J[b] & 1) y |= Config(1) << b;
      }
      joint[(std::size_t(y) << ki) | x] += w[c];
      rowsum[x] += w[c];
      colsum[y] += w[c];
    }
    const auto& a_list = upsets_table(ki);
    const auto& b_list = upsets_table(kj);
    std::vector<Int> va(std::size_t(1) << kj);
    for (std::uint64_t a_points : a_list) {
      Int sa = 0;
      for (auto& v : va) v = 0;
      for (int x = 0; x < (1 << ki); ++x) {
        if (!(a_points >> x & 1)) continue;
        sa += rowsum[x];
        for (Config y = 0; y < (Config(1) << kj); ++y) {
          va[y] += joint[(std::size_t(y) << ki) | x];
        }
      }
      for (std::uint64_t b_points : b_list) {
        Int sb = 0, sab = 0;
        for (Config y = 0; y < (Config(1) << kj); ++y) {
          if (b_points >> y & 1) {
            sb += colsum[y];
            sab += va[y];
          }
        }
        if (sab * total > sa * sb) {
          nlohmann::json split = nlohmann::json::array();
          for (int c : I) split.push_back(c + 1);
          nlohmann::json amem = nlohmann::json::array();
          for (int x = 0; x < (1 << ki); ++x) {
            if (a_points >> x & 1) amem.push_back(config_to_bitstring(x, ki));
          }
          nlohmann::json bmem = nlohmann::json::array();
          for (Config y = 0; y < (Config(1) << kj); ++y) {
            if (b_points >> y & 1) bmem.push_back(config_to_bitstring(y, kj));
          }
          return nlohmann::json{
              {"kind", "event-pair"},
              {"split", std::move(split)},
              {"a_members", std::move(amem)},
              {"b_members", std::move(bmem)},
              {"massA", ratio_str(sa, denom)},
              {"massB", ratio_str(sb, denom)},
              {"massAB", ratio_str(sab, denom)},
              {"total", ratio_str(total, denom)}};
        }
      }
    }
  }
  return std::nullopt;
}

namespace {

void require_event_cap(int n, const char* what) {
  if (n > kEventCap) {
    fail(ErrorCode::CapExceeded, std::string(what) + " capped at n <= " +
                                     std::to_string(kEventCap));
  }
}

// Conditioned integer weight vector for an assignment; empty if zero mass.
std::vector<Int> conditioned_weights(const ClearedMeasure& cm, Config fixset,
                                     Config values,
                                     std::vector<int>* free_coords) {
  free_coords->clear();
  for (int i = 0; i < cm.n; ++i) {
    if (!(fixset >> i & 1)) free_coords->push_back(i);
  }
  const int k = static_cast<int>(free_coords->size());
  std::vector<Int> w(std::size_t(1) << k, Int(0));
  Int mass = 0;
  for (Config sub = 0; sub < (Config(1) << k); ++sub) {
    Config full = values;
    for (int x = 0; x < k; ++x) {
      if (sub >> x & 1) full |= Config(1) << (*free_coords)[x];
    }
    w[sub] = cm.w[full];
    mass += w[sub];
  }
  if (mass == 0) w.clear();
  return w;
}

// Rewrites sub-cube witness fields back to original coordinate labels.
nlohmann::json relabel_witness(nlohmann::json witness,
                               const std::vector<int>& free_coords,
                               nlohmann::json assignment) {
  witness["assignment"] = std::move(assignment);
  if (witness.contains("split")) {
    for (auto& c : witness["split"]) {
      c = free_coords[c.get<int>() - 1] + 1;
    }
  }
  for (const char* key : {"i", "j"}) {
    if (witness.contains(key)) {
      witness[key] = free_coords[witness[key].get<int>() - 1] + 1;
    }
  }
  return witness;
}

}  // namespace

Verdict check_NA(const Measure& m) {
  ClearedMeasure cm = ClearedMeasure::of(m);
  require_mass(cm);
  require_event_cap(cm.n, "event-pair scan");
  if (auto w = na_violation(cm.n, cm.w, cm.denom)) {
    (*w)["assignment"] = nlohmann::json::array();
    return Verdict::fails("split-scan", *w);
  }
  return Verdict::holds("split-scan");
}

Verdict check_CNA(const Measure& m) {
  ClearedMeasure cm = ClearedMeasure::of(m);
  require_mass(cm);
  require_event_cap(cm.n, "conditional event-pair scan");
  std::vector<int> free_coords;
  for (Config fixset : subsets_by_size(cm.n)) {
    if (popcount(fixset) > cm.n - 2) continue;
    const int t = popcount(fixset);
    for (Config packed = 0; packed < (Config(1) << t); ++packed) {
      Config values = 0;
      int x = 0;
      for (int i = 0; i < cm.n; ++i) {
        if (fixset >> i & 1) {
          if (packed >> x++ & 1) values |= Config(1) << i;
        }
      }
      std::vector<Int> w = conditioned_weights(cm, fixset, values, &free_coords);
      if (w.empty()) continue;
      if (auto witness = na_violation(static_cast<int>(free_coords.size()), w,
                                      cm.denom)) {
        return Verdict::fails(
            "conditional-split-scan",
            relabel_witness(std::move(*witness), free_coords,
                            assignment_json(fixset, values, cm.n)));
      }
    }
  }
  return Verdict::holds("conditional-split-scan");
}

namespace {

// Feder-Mihail scan over cleared weights: every increasing event must be
// positively correlated with some coordinate. Streams all up-sets with
// incremental sums.
std::optional<nlohmann::json> fm_violation(int n, std::span<const Int> w,
                                           const Int& denom) {
  Int total = 0;
  std::vector<Int> single(n, Int(0));
  for (Config c = 0; c < (Config(1) << n); ++c) {
    total += w[c];
    for (int i = 0; i < n; ++i) {
      if (c >> i & 1) single[i] += w[c];
    }
  }
  std::optional<nlohmann::json> found;
  std::uint64_t prev = 0;
  Int sa = 0;
  std::vector<Int> joint(n, Int(0));
  enumerate_upsets(n, [&](std::uint64_t cur) {
    std::uint64_t diff = cur ^ prev;
    while (diff) {
      const int c = __builtin_ctzll(diff);
      diff &= diff - 1;
      const bool added = cur >> c & 1;
      if (added) {
        sa += w[c];
      } else {
        sa -= w[c];
      }
      for (int i = 0; i < n; ++i) {
        if (c >> i & 1) {
          if (added) {
            joint[i] += w[c];
          } else {
            joint[i] -= w[c];
          }
        }
      }
    }
    prev = cur;
    for (int i = 0; i < n; ++i) {
      if (joint[i] * total >= sa * single[i]) return true;
    }
    nlohmann::json members = nlohmann::json::array();
    nlohmann::json rows = nlohmann::json::array();
    for (Config c = 0; c < (Config(1) << n); ++c) {
      if (cur >> c & 1) members.push_back(config_to_bitstring(c, n));
    }
    for (int i = 0; i < n; ++i) {
      rows.push_back({{"coord", i + 1},
                      {"joint", ratio_str(joint[i], denom)},
                      {"single", ratio_str(single[i], denom)}});
    }
    found = nlohmann::json{{"kind", "fm-upset"},
                           {"members", std::move(members)},
                           {"massA", ratio_str(sa, denom)},
                           {"total", ratio_str(total, denom)},
                           {"per_coordinate", std::move(rows)}};
    return false;
  });
  return found;
}

}  // namespace

Verdict check_FM(const Measure& m) {
  ClearedMeasure cm = ClearedMeasure::of(m);
  require_mass(cm);
  require_event_cap(cm.n, "increasing-event scan");
  if (auto w = fm_violation(cm.n, cm.w, cm.denom)) {
    (*w)["assignment"] = nlohmann::json::array();
    return Verdict::fails("upset-scan", *w);
  }
  return Verdict::holds("upset-scan");
}

namespace {

Verdict cfm_scan(const ClearedMeasure& cm) {
  std::vector<int> free_coords;
  for (Config fixset : subsets_by_size(cm.n)) {
    if (popcount(fixset) > cm.n - 1) continue;
    const int t = popcount(fixset);
    for (Config packed = 0; packed < (Config(1) << t); ++packed) {
      Config values = 0;
      int x = 0;
      for (int i = 0; i < cm.n; ++i) {
        if (fixset >> i & 1) {
          if (packed >> x++ & 1) values |= Config(1) << i;
        }
      }
      std::vector<Int> w = conditioned_weights(cm, fixset, values, &free_coords);
      if (w.empty()) continue;
      if (auto witness = fm_violation(static_cast<int>(free_coords.size()), w,
                                      cm.denom)) {
        return Verdict::fails(
            "conditional-upset-scan",
            relabel_witness(std::move(*witness), free_coords,
                            assignment_json(fixset, values, cm.n)));
      }
    }
  }
  return Verdict::holds("conditional-upset-scan");
}

}  // namespace

Verdict check_CFM(const Measure& m) {
  ClearedMeasure cm = ClearedMeasure::of(m);
  require_mass(cm);
  require_event_cap(cm.n, "conditional increasing-event scan");
  return cfm_scan(cm);
}

Verdict falsify_FMplus(const Measure& m, const Budget& budget,
                       std::uint64_t seed) {
  ClearedMeasure cm = ClearedMeasure::of(m);
  require_mass(cm);
  require_event_cap(cm.n, "field falsifier");
  // Boundary patterns (0/oo entries) are exactly the conditionings; scan
  // them exhaustively first.
  Verdict boundary = cfm_scan(cm);
  if (boundary.status == Status::Fails) {
    boundary.detail["field"] = "boundary";
    return Verdict::fails("field-falsifier", boundary.detail);
  }
  Rng rng(seed);
  std::vector<Int> tilted(cm.w.size());
  for (long s = 0; s < budget.samples; ++s) {
    ExternalField field = rng.random_field(cm.n, 4);
    // Tilt the cleared weights exactly: multiply by num^eta * den^(1-eta).
    std::vector<Int> nums(cm.n), dens(cm.n);
    for (int i = 0; i < cm.n; ++i) {
      nums[i] = field.entries[i].value.get_num();
      dens[i] = field.entries[i].value.get_den();
    }
    for (Config c = 0; c < (Config(1) << cm.n); ++c) {
      Int v = cm.w[c];
      if (v != 0) {
        for (int i = 0; i < cm.n; ++i) {
          v *= (c >> i & 1) ? nums[i] : dens[i];
        }
      }
      tilted[c] = std::move(v);
    }
    if (auto witness = fm_violation(cm.n, tilted, cm.denom)) {
      nlohmann::json w = std::move(*witness);
      nlohmann::json field_json = nlohmann::json::array();
      for (const FieldEntry& e : field.entries) {
        field_json.push_back(format_rational(e.value));
      }
      w["field"] = std::move(field_json);
      w["sample_index"] = s;
      return Verdict::fails("field-falsifier", std::move(w));
    }
  }
  return Verdict::unknown("field-falsifier",
                          {{"boundary_patterns", "exhausted"},
                           {"samples", budget.samples},
                           {"violations", 0}});
}

std::optional<int> find_positive_influence(const Measure& m,
                                           std::span<const Rat> f) {
  if (f.size() != m.weights().size()) {
    fail(ErrorCode::DimensionMismatch, "function table size mismatch");
  }
  ClearedMeasure cm = ClearedMeasure::of(m);
  require_mass(cm);
  std::vector<Rat> fv(f.begin(), f.end());
  std::vector<Int> fi = cleared_integers(fv);
  Int ef = 0;
  std::vector<Int> single(cm.n, Int(0)), joint(cm.n, Int(0));
  for (Config c = 0; c < (Config(1) << cm.n); ++c) {
    Int wf = cm.w[c] * fi[c];
    ef += wf;
    for (int i = 0; i < cm.n; ++i) {
      if (c >> i & 1) {
        single[i] += cm.w[c];
        joint[i] += wf;
      }
    }
  }
  for (int i = 0; i < cm.n; ++i) {
    if (joint[i] * cm.total >= ef * single[i]) return i;
  }
  return std::nullopt;
}

bool lemma_four_sequence(std::span<const Rat> alpha, std::span<const Rat> beta,
                         std::span<const Rat> gamma,
                         std::span<const Rat> delta) {
  const std::size_t n = alpha.size();
  if (beta.size() != n || gamma.size() != n || delta.size() != n || n == 0) {
    fail(ErrorCode::DimensionMismatch, "sequences must share a positive length");
  }
  auto nonneg = [](std::span<const Rat> s) {
    return std::all_of(s.begin(), s.end(), [](const Rat& q) { return q >= 0; });
  };
  if (!nonneg(alpha) || !nonneg(beta) || !nonneg(gamma) || !nonneg(delta)) {
    fail(ErrorCode::PreconditionViolated, "sequences must be nonnegative");
  }
  auto all_zero = [](std::span<const Rat> s) {
    return std::all_of(s.begin(), s.end(), [](const Rat& q) { return q == 0; });
  };
  if (all_zero(alpha) || all_zero(beta)) {
    fail(ErrorCode::PreconditionViolated,
         "alpha and beta must not be identically zero");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (gamma[i] > gamma[i + 1] || delta[i] > delta[i + 1]) {
      fail(ErrorCode::PreconditionViolated, "gamma and delta must be increasing");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (gamma[i] < delta[j]) {
        fail(ErrorCode::PreconditionViolated,
             "gamma must dominate delta at lagging indices");
      }
    }
  }
  Rat sum_a = 0, sum_b = 0, sum_ag = 0, sum_bd = 0;
  Rat sum_ia = 0, sum_ib = 0, sum_iag = 0, sum_ibd = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Rat idx(static_cast<long>(i));
    sum_a += alpha[i];
    sum_b += beta[i];
    sum_ag += alpha[i] * gamma[i];
    sum_bd += beta[i] * delta[i];
    sum_ia += idx * alpha[i];
    sum_ib += idx * beta[i];
    sum_iag += idx * alpha[i] * gamma[i];
    sum_ibd += idx * beta[i] * delta[i];
  }
  if (sum_ag * sum_b > sum_bd * sum_a) {
    fail(ErrorCode::PreconditionViolated,
         "averaged gamma must not exceed averaged delta");
  }
  return sum_ia * sum_bd + sum_ib * sum_ag <= sum_iag * sum_b + sum_ibd * sum_a;
}

}  // namespace negdep
