#pragma once

#include <json.hpp>

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "negdep/verdict.hpp"

namespace negdep {

// Tracked property set. LCm is parameterized by the projection order.
enum class Prop {
  NC,
  PLC,
  NLC,
  hNLC,
  CNC,
  NA,
  CNA,
  NCplus,
  NAplus,
  FM,
  CFM,
  FMplus,
  NMP,
  SCP,
  ULC,
  LC,
  Unimodal,
  LCm,
  APP,
  CAPP,
  Exchangeable,
  AlmostExchangeable,
  ProductRescaling,
};

struct PropKey {
  Prop p;
  int m = 0;  // projection order, used only when p == Prop::LCm

  auto operator<=>(const PropKey&) const = default;
};

const char* prop_name(Prop p);
std::string prop_key_name(const PropKey& k);           // e.g. "LCm(5)"
std::optional<PropKey> parse_prop_key(const std::string& name);
std::vector<Prop> all_props();

struct Provenance {
  enum Kind { Direct, Derived } kind = Direct;
  // Direct: checker method (or "construction" for facts seeded by the
  // family builder). Derived: rule id, premises list the supporting keys.
  std::string source;
  std::vector<PropKey> premises;
};

struct LedgerEntry {
  PropKey key;
  Verdict verdict;
  Provenance prov;
  int seq = 0;  // insertion order; derivations only reference earlier seqs
};

// One directed implication: all premises Holds forces the conclusion. Rules
// with two-way statements expand into one DirectedRule per direction;
// contrapositives are applied automatically and are not listed.
struct DirectedRule {
  std::string id;           // shared by all directions of one rule
  std::string description;  // behavior-level statement of this direction
  std::vector<PropKey> premises;
  PropKey conclusion;
};

// The fixed rule registry; no other implications are ever applied.
const std::vector<DirectedRule>& rule_registry();

// Rules that exist in the registry for bookkeeping but expand to no
// directed implications (their partner property is not tracked).
nlohmann::json rule_notes();

class PropertyLedger {
 public:
  explicit PropertyLedger(std::string measure_label = "");

  // Records a checker verdict (or a construction-seeded fact). A definite
  // record conflicting with an existing definite entry is Inconsistent.
  void record_direct(const PropKey& key, const Verdict& v,
                     const std::string& source_override = "");

  const LedgerEntry* find(const PropKey& key) const;

  // Fixpoint closure under the rule registry, forward and contrapositive.
  // Conflicting derivations raise Inconsistent; they are never resolved
  // silently.
  void deduce();

  // Full derivation tree down to Direct leaves. NoVerdict if absent.
  nlohmann::json explain(const PropKey& key) const;

  // Direct-vs-derived agreements observed during deduce, plus every Unknown
  // with the rules that could still resolve it.
  nlohmann::json audit() const;

  nlohmann::json to_json() const;

  const std::map<PropKey, LedgerEntry>& entries() const { return entries_; }

 private:
  void apply(const PropKey& key, Status status, const DirectedRule& rule,
             bool contrapositive, const std::vector<PropKey>& premises,
             bool& changed);

  std::string label_;
  std::map<PropKey, LedgerEntry> entries_;
  int next_seq_ = 0;
  // (property, rule direction, agreed status) triples seen when a rule
  // re-derived an already-known verdict.
  std::vector<nlohmann::json> agreements_;
};

}  // namespace negdep
