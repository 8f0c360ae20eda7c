#include "negdep/measure.hpp"

#include <algorithm>
#include <set>

#include "negdep/errors.hpp"

namespace negdep {

Measure::Measure(int n, std::vector<Rat> weights, std::string label)
    : n_(n), w_(std::move(weights)), label_(std::move(label)) {
  if (n < 1 || n > kMaxCoords) {
    fail(ErrorCode::CapExceeded,
         "coordinate count " + std::to_string(n) + " outside 1.." +
             std::to_string(kMaxCoords));
  }
  if (w_.size() != (std::size_t(1) << n)) {
    fail(ErrorCode::DimensionMismatch,
         "weight array size does not match coordinate count");
  }
  for (const Rat& q : w_) {
    if (q < 0) {
      fail(ErrorCode::InvalidDistribution, "negative weight");
    }
  }
}

Rat Measure::total_mass() const {
  Rat t = 0;
  for (const Rat& q : w_) t += q;
  return t;
}

std::vector<Config> Measure::support() const {
  std::vector<Config> s;
  for (Config c = 0; c < configs(); ++c) {
    if (w_[c] != 0) s.push_back(c);
  }
  return s;
}

void Assignment::validate(int n) const {
  std::set<int> seen;
  for (const auto& [coord, value] : fixed) {
    if (coord < 0 || coord >= n) {
      fail(ErrorCode::ParameterOutOfRange,
           "assignment coordinate out of range");
    }
    if (value != 0 && value != 1) {
      fail(ErrorCode::ParameterOutOfRange, "assignment value must be 0 or 1");
    }
    if (!seen.insert(coord).second) {
      fail(ErrorCode::ParameterOutOfRange,
           "assignment fixes a coordinate twice");
    }
  }
}

ExternalField ExternalField::ones(int n) {
  ExternalField w;
  w.entries.assign(n, FieldEntry::finite(1));
  return w;
}

void ExternalField::validate(int n) const {
  if (static_cast<int>(entries.size()) != n) {
    fail(ErrorCode::DimensionMismatch, "field length does not match measure");
  }
  for (const FieldEntry& e : entries) {
    if (!e.infinite && e.value < 0) {
      fail(ErrorCode::ParameterOutOfRange, "field entries must be in [0, oo]");
    }
  }
}

bool ExternalField::all_finite_positive() const {
  return std::all_of(entries.begin(), entries.end(), [](const FieldEntry& e) {
    return !e.infinite && e.value > 0;
  });
}

Measure normalize(const Measure& m) {
  const Rat t = m.total_mass();
  if (t == 0) fail(ErrorCode::ZeroMass, "cannot normalize a zero measure");
  std::vector<Rat> w = m.weights();
  for (Rat& q : w) q /= t;
  return Measure(m.coords(), std::move(w), m.label());
}

Relabeled condition(const Measure& m, const Assignment& a) {
  a.validate(m.coords());
  Config fixed_mask = 0, fixed_values = 0;
  for (const auto& [coord, value] : a.fixed) {
    fixed_mask |= Config(1) << coord;
    if (value) fixed_values |= Config(1) << coord;
  }
  std::vector<int> kept;
  for (int i = 0; i < m.coords(); ++i) {
    if (!(fixed_mask >> i & 1)) kept.push_back(i);
  }
  if (kept.empty()) {
    fail(ErrorCode::CapExceeded, "conditioning must leave a free coordinate");
  }
  const int k = static_cast<int>(kept.size());
  std::vector<Rat> w(std::size_t(1) << k, Rat(0));
  Rat mass = 0;
  for (Config sub = 0; sub < (Config(1) << k); ++sub) {
    Config full = fixed_values;
    for (int j = 0; j < k; ++j) {
      if (sub >> j & 1) full |= Config(1) << kept[j];
    }
    w[sub] = m.weight(full);
    mass += w[sub];
  }
  if (mass == 0) {
    fail(ErrorCode::ZeroProbabilityCondition,
         "conditioning event has zero mass");
  }
  for (Rat& q : w) q /= mass;
  return Relabeled{Measure(k, std::move(w), m.label()), std::move(kept)};
}

Relabeled impose_field(const Measure& m, const ExternalField& w) {
  w.validate(m.coords());
  Assignment forced;
  for (int i = 0; i < m.coords(); ++i) {
    const FieldEntry& e = w.entries[i];
    if (e.infinite) {
      forced.fix(i, 1);
    } else if (e.value == 0) {
      forced.fix(i, 0);
    }
  }
  if (!forced.empty()) {
    Relabeled cond = condition(m, forced);
    ExternalField rest;
    for (int orig : cond.kept) rest.entries.push_back(w.entries[orig]);
    Relabeled tilted = impose_field(cond.measure, rest);
    // tilted.kept is the identity here: `rest` is finite positive.
    return Relabeled{std::move(tilted.measure), std::move(cond.kept)};
  }
  std::vector<Rat> out(m.weights());
  Rat mass = 0;
  for (Config c = 0; c < m.configs(); ++c) {
    for (int i = 0; i < m.coords(); ++i) {
      if (c >> i & 1) out[c] *= w.entries[i].value;
    }
    mass += out[c];
  }
  if (mass == 0) fail(ErrorCode::ZeroMass, "field wiped out all mass");
  for (Rat& q : out) q /= mass;
  std::vector<int> kept(m.coords());
  for (int i = 0; i < m.coords(); ++i) kept[i] = i;
  return Relabeled{Measure(m.coords(), std::move(out), m.label()),
                   std::move(kept)};
}

Relabeled project(const Measure& m, const std::vector<int>& keep) {
  if (keep.empty()) {
    fail(ErrorCode::ParameterOutOfRange, "projection needs a coordinate");
  }
  for (std::size_t j = 0; j < keep.size(); ++j) {
    if (keep[j] < 0 || keep[j] >= m.coords()) {
      fail(ErrorCode::ParameterOutOfRange, "projection coordinate out of range");
    }
    if (j > 0 && keep[j] <= keep[j - 1]) {
      fail(ErrorCode::ParameterOutOfRange,
           "projection coordinates must be strictly increasing");
    }
  }
  const int k = static_cast<int>(keep.size());
  std::vector<Rat> w(std::size_t(1) << k, Rat(0));
  for (Config c = 0; c < m.configs(); ++c) {
    Config sub = 0;
    for (int j = 0; j < k; ++j) {
      if (c >> keep[j] & 1) sub |= Config(1) << j;
    }
    w[sub] += m.weight(c);
  }
  return Relabeled{Measure(k, std::move(w), m.label()), keep};
}

RankSequence rank_sequence(const Measure& m) {
  const Rat t = m.total_mass();
  if (t == 0) fail(ErrorCode::ZeroMass, "rank sequence of a zero measure");
  RankSequence rs;
  rs.r.assign(m.coords() + 1, Rat(0));
  for (Config c = 0; c < m.configs(); ++c) rs.r[popcount(c)] += m.weight(c);
  for (Rat& q : rs.r) q /= t;
  return rs;
}

Measure rank_rescale(const Measure& m, const std::vector<Rat>& a) {
  if (static_cast<int>(a.size()) != m.coords() + 1) {
    fail(ErrorCode::DimensionMismatch,
         "rescaling sequence must have one entry per level");
  }
  for (const Rat& q : a) {
    if (q < 0) fail(ErrorCode::ParameterOutOfRange, "negative rescaling entry");
  }
  std::vector<Rat> w(m.weights());
  Rat mass = 0;
  for (Config c = 0; c < m.configs(); ++c) {
    w[c] *= a[popcount(c)];
    mass += w[c];
  }
  if (mass == 0) fail(ErrorCode::ZeroMass, "rescaling wiped out all mass");
  for (Rat& q : w) q /= mass;
  return Measure(m.coords(), std::move(w), m.label());
}

Measure complement_measure(const Measure& m) {
  const Config all = m.configs() - 1;
  std::vector<Rat> w(m.weights().size());
  for (Config c = 0; c < m.configs(); ++c) w[c] = m.weight(all ^ c);
  return Measure(m.coords(), std::move(w), m.label());
}

namespace {

// Invariance under every transposition of coordinates in `group`.
bool invariant_under_group(const Measure& m, const std::vector<int>& group) {
  for (std::size_t x = 0; x + 1 < group.size(); ++x) {
    const int i = group[x], j = group[x + 1];
    // Transpositions of adjacent group members generate the full symmetric
    // group on `group`.
    for (Config c = 0; c < m.configs(); ++c) {
      const int bi = c >> i & 1, bj = c >> j & 1;
      if (bi == bj) continue;
      Config swapped = c ^ (Config(1) << i) ^ (Config(1) << j);
      if (m.weight(c) != m.weight(swapped)) return false;
    }
  }
  return true;
}

}  // namespace

SymmetryType symmetry_type(const Measure& m) {
  std::vector<int> everyone(m.coords());
  for (int i = 0; i < m.coords(); ++i) everyone[i] = i;
  if (invariant_under_group(m, everyone)) {
    return SymmetryType{SymmetryType::Exchangeable, std::nullopt};
  }
  for (int pivot = 0; pivot < m.coords(); ++pivot) {
    std::vector<int> rest;
    for (int i = 0; i < m.coords(); ++i) {
      if (i != pivot) rest.push_back(i);
    }
    if (invariant_under_group(m, rest)) {
      return SymmetryType{SymmetryType::AlmostExchangeable, pivot};
    }
  }
  return SymmetryType{SymmetryType::Neither, std::nullopt};
}

}  // namespace negdep
