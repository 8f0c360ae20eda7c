#include "negdep/inference.hpp"

#include <algorithm>

#include "negdep/errors.hpp"

namespace negdep {

namespace {

struct PropNameRow {
  Prop p;
  const char* name;
};

constexpr PropNameRow kPropNames[] = {
    {Prop::NC, "NC"},
    {Prop::PLC, "PLC"},
    {Prop::NLC, "NLC"},
    {Prop::hNLC, "hNLC"},
    {Prop::CNC, "CNC"},
    {Prop::NA, "NA"},
    {Prop::CNA, "CNA"},
    {Prop::NCplus, "NCplus"},
    {Prop::NAplus, "NAplus"},
    {Prop::FM, "FM"},
    {Prop::CFM, "CFM"},
    {Prop::FMplus, "FMplus"},
    {Prop::NMP, "NMP"},
    {Prop::SCP, "SCP"},
    {Prop::ULC, "ULC"},
    {Prop::LC, "LC"},
    {Prop::Unimodal, "Unimodal"},
    {Prop::LCm, "LCm"},
    {Prop::APP, "APP"},
    {Prop::CAPP, "CAPP"},
    {Prop::Exchangeable, "Exchangeable"},
    {Prop::AlmostExchangeable, "AlmostExchangeable"},
    {Prop::ProductRescaling, "ProductRescaling"},
};

PropKey K(Prop p, int m = 0) { return PropKey{p, m}; }

std::vector<DirectedRule> build_registry() {
  std::vector<DirectedRule> r;
  auto add = [&](std::string id, std::string desc,
                 std::vector<PropKey> premises, PropKey conclusion) {
    r.push_back(DirectedRule{std::move(id), std::move(desc),
                             std::move(premises), conclusion});
  };

  // R1: conditional pair negativity <=> hereditary lattice negativity.
  add("R1", "conditional pair negativity implies hereditary lattice negativity",
      {K(Prop::CNC)}, K(Prop::hNLC));
  add("R1", "hereditary lattice negativity implies conditional pair negativity",
      {K(Prop::hNLC)}, K(Prop::CNC));

  // R2 expands to no implications; see rule_notes().

  // R3: negativity plus matching feasibility upgrades to association, in the
  // conditional and the field-closed settings.
  add("R3",
      "conditional pair negativity with conditional matching feasibility "
      "implies conditional association",
      {K(Prop::CNC), K(Prop::CFM)}, K(Prop::CNA));
  add("R3",
      "field-closed pair negativity with field-closed matching feasibility "
      "implies field-closed association",
      {K(Prop::NCplus), K(Prop::FMplus)}, K(Prop::NAplus));

  // R4: single-pivot symmetry gives field-closed matching feasibility.
  add("R4",
      "symmetry in all coordinates but one implies field-closed matching "
      "feasibility",
      {K(Prop::AlmostExchangeable)}, K(Prop::FMplus));

  // R5: under single-pivot symmetry the association upgrades are two-way.
  add("R5",
      "under symmetry in all coordinates but one, conditional pair "
      "negativity implies conditional association",
      {K(Prop::AlmostExchangeable), K(Prop::CNC)}, K(Prop::CNA));
  add("R5",
      "under symmetry in all coordinates but one, conditional association "
      "implies conditional pair negativity",
      {K(Prop::AlmostExchangeable), K(Prop::CNA)}, K(Prop::CNC));
  add("R5",
      "under symmetry in all coordinates but one, field-closed pair "
      "negativity implies field-closed association",
      {K(Prop::AlmostExchangeable), K(Prop::NCplus)}, K(Prop::NAplus));
  add("R5",
      "under symmetry in all coordinates but one, field-closed association "
      "implies field-closed pair negativity",
      {K(Prop::AlmostExchangeable), K(Prop::NAplus)}, K(Prop::NCplus));

  // R6: under full symmetry five properties coincide; one directed rule per
  // ordered pair.
  {
    const Prop cluster[] = {Prop::CNC, Prop::CNA, Prop::NCplus, Prop::NAplus,
                            Prop::ULC};
    for (Prop from : cluster) {
      for (Prop to : cluster) {
        if (from == to) continue;
        add("R6",
            std::string("under full symmetry ") + prop_name(from) +
                " implies " + prop_name(to),
            {K(Prop::Exchangeable), K(from)}, K(to));
      }
    }
  }

  // R7: level dominance implies matching feasibility.
  add("R7", "level dominance implies matching feasibility", {K(Prop::NMP)},
      K(Prop::FM));

  // R8: rank-rescaled product structure implies level dominance.
  add("R8", "rank-rescaled product structure implies level dominance",
      {K(Prop::ProductRescaling)}, K(Prop::NMP));

  // R9: conditional antipodal-pair monotonicity implies rank ultra
  // log-concavity.
  add("R9",
      "conditional antipodal-pair monotonicity implies rank ultra "
      "log-concavity",
      {K(Prop::CAPP)}, K(Prop::ULC));

  // R10: field-closed pair negativity implies order-5 projected
  // log-concavity and is equivalent to orders 2 and 3.
  add("R10",
      "field-closed pair negativity implies order-5 projected log-concavity",
      {K(Prop::NCplus)}, K(Prop::LCm, 5));
  add("R10",
      "field-closed pair negativity implies order-2 projected log-concavity",
      {K(Prop::NCplus)}, K(Prop::LCm, 2));
  add("R10",
      "order-2 projected log-concavity implies field-closed pair negativity",
      {K(Prop::LCm, 2)}, K(Prop::NCplus));
  add("R10",
      "field-closed pair negativity implies order-3 projected log-concavity",
      {K(Prop::NCplus)}, K(Prop::LCm, 3));
  add("R10",
      "order-3 projected log-concavity implies field-closed pair negativity",
      {K(Prop::LCm, 3)}, K(Prop::NCplus));

  // R11: definitional one-step implications.
  auto def = [&](Prop from, Prop to) {
    add("R11",
        std::string(prop_name(from)) + " implies " + prop_name(to) +
            " by definition",
        {K(from)}, K(to));
  };
  def(Prop::NAplus, Prop::CNA);
  def(Prop::CNA, Prop::CNC);
  def(Prop::NAplus, Prop::NCplus);
  def(Prop::NCplus, Prop::CNC);
  def(Prop::CNA, Prop::NA);
  def(Prop::NA, Prop::NC);
  def(Prop::CNC, Prop::NC);
  def(Prop::FMplus, Prop::CFM);
  def(Prop::CFM, Prop::FM);
  def(Prop::ULC, Prop::LC);
  def(Prop::LC, Prop::Unimodal);
  // Scope extensions in the same definitional spirit: symmetry containments,
  // lattice-negativity containment, and projection-order monotonicity.
  def(Prop::Exchangeable, Prop::AlmostExchangeable);
  def(Prop::Exchangeable, Prop::ProductRescaling);
  def(Prop::hNLC, Prop::NLC);
  for (int m = 3; m <= 12; ++m) {
    add("R11",
        "order-" + std::to_string(m) + " projected log-concavity implies "
        "order-" + std::to_string(m - 1) + " by definition",
        {K(Prop::LCm, m)}, K(Prop::LCm, m - 1));
  }

  return r;
}

}  // namespace

const char* prop_name(Prop p) {
  for (const PropNameRow& row : kPropNames) {
    if (row.p == p) return row.name;
  }
  return "?";
}

std::string prop_key_name(const PropKey& k) {
  if (k.p == Prop::LCm) return "LCm(" + std::to_string(k.m) + ")";
  return prop_name(k.p);
}

std::optional<PropKey> parse_prop_key(const std::string& name) {
  if (name.rfind("LCm(", 0) == 0 && name.back() == ')') {
    const std::string inner = name.substr(4, name.size() - 5);
    if (inner.empty() ||
        inner.find_first_not_of("0123456789") != std::string::npos) {
      return std::nullopt;
    }
    int m = std::stoi(inner);
    if (m < 1 || m > 24) return std::nullopt;
    return PropKey{Prop::LCm, m};
  }
  for (const PropNameRow& row : kPropNames) {
    if (row.p != Prop::LCm && name == row.name) return PropKey{row.p, 0};
  }
  return std::nullopt;
}

std::vector<Prop> all_props() {
  std::vector<Prop> out;
  for (const PropNameRow& row : kPropNames) out.push_back(row.p);
  return out;
}

const std::vector<DirectedRule>& rule_registry() {
  static const std::vector<DirectedRule> registry = build_registry();
  return registry;
}

nlohmann::json rule_notes() {
  return nlohmann::json{
      {"R2",
       "field-closed pair negativity is equivalent to the field-closed form "
       "of hereditary lattice negativity; that partner property is not "
       "tracked in the ledger, so the rule contributes no derivations"}};
}

namespace {

// deduce() re-fires every rule each pass, so identical agreement records
// must collapse to one.
void push_agreement(std::vector<nlohmann::json>& list, nlohmann::json item) {
  for (const nlohmann::json& seen : list) {
    if (seen == item) return;
  }
  list.push_back(std::move(item));
}

}  // namespace

PropertyLedger::PropertyLedger(std::string measure_label)
    : label_(std::move(measure_label)) {}

const LedgerEntry* PropertyLedger::find(const PropKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void PropertyLedger::record_direct(const PropKey& key, const Verdict& v,
                                   const std::string& source_override) {
  const std::string source =
      source_override.empty() ? v.method : source_override;
  auto it = entries_.find(key);
  if (it == entries_.end() || it->second.verdict.status == Status::Unknown) {
    LedgerEntry e;
    e.key = key;
    e.verdict = v;
    e.prov = Provenance{Provenance::Direct, source, {}};
    e.seq = next_seq_++;
    if (it != entries_.end() && v.status == Status::Unknown) {
      return;  // never replace one Unknown with another
    }
    if (it != entries_.end()) {
      e.verdict.detail["superseded"] = it->second.verdict.to_json();
    }
    entries_[key] = std::move(e);
    return;
  }
  if (v.status == Status::Unknown) return;  // keep the definite entry
  if (v.status == it->second.verdict.status) {
    push_agreement(agreements_,
                   {{"property", prop_key_name(key)},
                    {"status", status_name(v.status)},
                    {"via", "re-check:" + source}});
    return;
  }
  fail(ErrorCode::Inconsistent,
       "direct verdicts conflict for " + prop_key_name(key) + ": existing " +
           status_name(it->second.verdict.status) + " (" +
           it->second.prov.source + ") vs new " + status_name(v.status) +
           " (" + source + ")");
}

void PropertyLedger::apply(const PropKey& key, Status status,
                           const DirectedRule& rule, bool contrapositive,
                           const std::vector<PropKey>& premises,
                           bool& changed) {
  const std::string source =
      rule.id + (contrapositive ? ".contrapositive" : "");
  auto it = entries_.find(key);
  if (it != entries_.end() && it->second.verdict.status != Status::Unknown) {
    if (it->second.verdict.status == status) {
      nlohmann::json prem = nlohmann::json::array();
      for (const PropKey& p : premises) prem.push_back(prop_key_name(p));
      push_agreement(agreements_, {{"property", prop_key_name(key)},
                                   {"status", status_name(status)},
                                   {"via", source},
                                   {"premises", std::move(prem)}});
      return;
    }
    std::string msg = "rule " + source + " derives " + status_name(status) +
                      " for " + prop_key_name(key) + " but the ledger holds " +
                      status_name(it->second.verdict.status) + " (" +
                      (it->second.prov.kind == Provenance::Direct
                           ? "direct: " + it->second.prov.source
                           : "derived: " + it->second.prov.source) +
                      "); premises:";
    for (const PropKey& p : premises) {
      msg += " " + prop_key_name(p) + "=" +
             status_name(entries_.at(p).verdict.status);
    }
    fail(ErrorCode::Inconsistent, msg);
  }
  LedgerEntry e;
  e.key = key;
  e.verdict = status == Status::Holds
                  ? Verdict::holds("rule:" + source,
                                   {{"description", rule.description}})
                  : Verdict::fails("rule:" + source,
                                   {{"description", rule.description}});
  if (it != entries_.end()) {
    e.verdict.detail["superseded"] = it->second.verdict.to_json();
  }
  e.prov = Provenance{Provenance::Derived, source, premises};
  e.seq = next_seq_++;
  entries_[key] = std::move(e);
  changed = true;
}

void PropertyLedger::deduce() {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const DirectedRule& rule : rule_registry()) {
      // Forward: all premises hold.
      bool all_hold = true;
      for (const PropKey& p : rule.premises) {
        const LedgerEntry* e = find(p);
        if (!e || e->verdict.status != Status::Holds) {
          all_hold = false;
          break;
        }
      }
      if (all_hold) {
        apply(rule.conclusion, Status::Holds, rule, false, rule.premises,
              changed);
      }
      // Contrapositive: conclusion fails and every premise but one holds;
      // the remaining premise must fail.
      const LedgerEntry* c = find(rule.conclusion);
      if (c && c->verdict.status == Status::Fails) {
        int open = -1;
        bool usable = true;
        for (std::size_t i = 0; i < rule.premises.size(); ++i) {
          const LedgerEntry* e = find(rule.premises[i]);
          if (e && e->verdict.status == Status::Holds) continue;
          if (open >= 0) {
            usable = false;  // two unresolved premises: nothing to pin
            break;
          }
          open = static_cast<int>(i);
        }
        if (usable && open >= 0) {
          std::vector<PropKey> premises;
          premises.push_back(rule.conclusion);
          for (std::size_t i = 0; i < rule.premises.size(); ++i) {
            if (static_cast<int>(i) != open) premises.push_back(rule.premises[i]);
          }
          apply(rule.premises[open], Status::Fails, rule, true, premises,
                changed);
        }
      }
    }
  }
}

nlohmann::json PropertyLedger::explain(const PropKey& key) const {
  const LedgerEntry* e = find(key);
  if (!e) {
    fail(ErrorCode::NoVerdict, "no verdict recorded for " + prop_key_name(key));
  }
  nlohmann::json node{{"property", prop_key_name(key)},
                      {"status", status_name(e->verdict.status)}};
  if (e->prov.kind == Provenance::Direct) {
    node["checker"] = e->prov.source;
    if (!e->verdict.detail.is_null() && !e->verdict.detail.empty()) {
      node["detail"] = e->verdict.detail;
    }
  } else {
    node["rule"] = e->prov.source;
    nlohmann::json kids = nlohmann::json::array();
    for (const PropKey& p : e->prov.premises) kids.push_back(explain(p));
    node["premises"] = std::move(kids);
  }
  return node;
}

nlohmann::json PropertyLedger::audit() const {
  nlohmann::json unknowns = nlohmann::json::array();
  for (const auto& [key, entry] : entries_) {
    if (entry.verdict.status != Status::Unknown) continue;
    nlohmann::json options = nlohmann::json::array();
    for (const DirectedRule& rule : rule_registry()) {
      if (!(rule.conclusion == key)) continue;
      bool blocked = false;
      nlohmann::json missing = nlohmann::json::array();
      for (const PropKey& p : rule.premises) {
        const LedgerEntry* e = find(p);
        if (e && e->verdict.status == Status::Fails) {
          blocked = true;
          break;
        }
        if (!e || e->verdict.status != Status::Holds) {
          missing.push_back(prop_key_name(p));
        }
      }
      if (blocked) continue;
      options.push_back({{"rule", rule.id},
                         {"description", rule.description},
                         {"missing", std::move(missing)}});
    }
    std::sort(options.begin(), options.end(),
              [](const nlohmann::json& a, const nlohmann::json& b) {
                return a.at("missing").size() < b.at("missing").size();
              });
    unknowns.push_back({{"property", prop_key_name(key)},
                        {"evidence", entry.verdict.to_json()},
                        {"resolving_rules", std::move(options)}});
  }
  return nlohmann::json{{"agreements", agreements_},
                        {"unknowns", std::move(unknowns)}};
}

nlohmann::json PropertyLedger::to_json() const {
  nlohmann::json props = nlohmann::json::object();
  for (const auto& [key, entry] : entries_) {
    nlohmann::json e = entry.verdict.to_json();
    if (entry.prov.kind == Provenance::Direct) {
      e["provenance"] = {{"kind", "direct"}, {"checker", entry.prov.source}};
    } else {
      nlohmann::json prem = nlohmann::json::array();
      for (const PropKey& p : entry.prov.premises) {
        prem.push_back(prop_key_name(p));
      }
      e["provenance"] = {{"kind", "derived"},
                         {"rule", entry.prov.source},
                         {"premises", std::move(prem)}};
    }
    props[prop_key_name(key)] = std::move(e);
  }
  nlohmann::json out{{"properties", std::move(props)}};
  if (!label_.empty()) out["measure"] = label_;
  return out;
}

}  // namespace negdep
