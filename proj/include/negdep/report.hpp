#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "negdep/inference.hpp"
#include "negdep/measure.hpp"
#include "negdep/rng.hpp"
#include "negdep/verdict.hpp"

namespace negdep {

// Options shared by the check and search commands: the falsification budget
// and the RNG seed. Reproduce targets pin their own parameters instead so
// that their output is a fixed, comparable artifact.
struct RunOptions {
  Budget budget;
  std::uint64_t seed = 0;
};

// Outcome of one command. `body` is deterministic given (inputs, seed,
// budgets); `timings_ms` carries wall-clock milliseconds and is excluded from
// golden comparisons. Exit codes: 0 = all expectations met, 2 = a pinned
// verdict mismatched, 4 = budget exhausted where a definite verdict was
// required. (3 = input error is raised as Error before any Report exists.)
struct Report {
  nlohmann::json body;
  nlohmann::json timings_ms = nlohmann::json::object();
  int exit_code = 0;

  // body with timings attached, for rendering.
  nlohmann::json full() const;
  std::string text() const;
};

// A measure built from a family spec string, plus the properties the
// construction itself guarantees; those become "construction" facts in the
// ledger before any checker runs.
struct BuiltMeasure {
  Measure measure;
  std::string source;
  std::vector<PropKey> facts;
};

// Family spec grammar: "name:key=value,key=value,...". List-valued keys keep
// their commas ("urn:n=3,m=2,p=98/100,1/100,1/100"); a value of the form
// "@path" reads JSON from that file. Supported names:
//   product:p=<list>          independent coordinates
//   exchangeable:a=<list>     prescribed level sums a_0..a_n
//   uniform:n=<int>           uniform measure on the n-cube
//   nu:k=<int>,beta=<rat>     two-block threshold family
//   urn:n=,m=,p=<list>[,a=<list>]  occupancy measure
//   gadget:k=<int>            forest measure of the two-hub gadget graph
//   forests:graph=@file       forest measure of a JSON graph
//   trees:graph=@file         spanning-tree measure of a JSON graph
//   matroid:spec=@file        uniform independence measure of a JSON matroid
BuiltMeasure build_family(const std::string& spec);

// Lenient property-token parser: canonical names ("NCplus"), any-case
// variants ("ncplus"), and "lcm(5)".
std::optional<PropKey> parse_prop_token(const std::string& token);

// Run the checker for one property. LCm uses key.m as the order; symmetry
// properties are decided by a full scan.
Verdict run_property(const Measure& m, const PropKey& key,
                     const RunOptions& options);

// check command: record construction facts and a symmetry scan, run the
// requested direct checks (per-check errors are recorded as Unknown, not
// fatal), close under the inference rules, and audit what stayed unknown.
Report run_check(const BuiltMeasure& input, const std::vector<PropKey>& props,
                 const RunOptions& options);

// Scripted experiments with pinned parameters and pinned expected verdicts;
// exit code 2 on mismatch. Targets: prop41 (--k), lemma41, urn-lc,
// urn-rayleigh, gadget-nmp (--k), mason-sweep (--edges), urn-cna.
Report run_reproduce(const std::string& target,
                     const std::map<std::string, std::string>& args);

// Randomized falsification harnesses: they log hits and near-misses and
// always exit 0 unless the input itself is invalid. Targets: lcm-gap (--m,
// --count), usf-rayleigh (--edges), cnc-vs-cna (--count, --coords),
// nlc-heredity (sample count = budget samples).
Report run_search(const std::string& target,
                  const std::map<std::string, std::string>& args,
                  const RunOptions& options);

std::vector<std::string> reproduce_targets();
std::vector<std::string> search_targets();

// Deterministic pool of measures on `coords` coordinates carrying evidence of
// field-closed pairwise negativity, mixing three constructions in rotation:
// field-tilted product measures, exchangeable measures with ultra
// log-concave level sums, and two-block threshold measures at 2*beta^2 >= 1
// reduced to `coords` coordinates by projection or conditioning.
std::vector<Measure> ncplus_evidence_pool(int count, int coords,
                                          std::uint64_t seed);

// Random measure with ~zero_percent of configurations carrying weight zero
// and the rest positive rationals with numerator/denominator <= bound;
// resamples until the support is nonempty.
Measure random_sparse_measure(Rng& rng, int n, int zero_percent, long bound);

}  // namespace negdep
