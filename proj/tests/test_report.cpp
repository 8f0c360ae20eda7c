#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "negdep/errors.hpp"
#include "negdep/families.hpp"
#include "negdep/inference.hpp"
#include "negdep/measure_io.hpp"
#include "negdep/report.hpp"
#include "negdep/rng.hpp"
#include "test_util.hpp"

using namespace negdep;
using negdep::testing::R;
using negdep::testing::error_code_of;
using negdep::testing::same_distribution;

namespace {

bool has_fact(const BuiltMeasure& bm, Prop p) {
  for (const PropKey& key : bm.facts) {
    if (key.p == p) return true;
  }
  return false;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& text)
      : path("/tmp/negdep_test_" + name) {
    std::ofstream out(path);
    out << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("family grammar: construction facts and measures") {
  const BuiltMeasure prod = build_family("product:p=1/2,1/3");
  CHECK(prod.measure.coords() == 2);
  CHECK(has_fact(prod, Prop::ProductRescaling));

  const BuiltMeasure unif = build_family("uniform:n=3");
  CHECK(has_fact(unif, Prop::Exchangeable));
  CHECK(unif.measure.total_mass() == 8);

  const BuiltMeasure exch = build_family("exchangeable:a=1,3,3,1");
  CHECK(has_fact(exch, Prop::Exchangeable));
  CHECK(same_distribution(exch.measure, unif.measure));

  const BuiltMeasure nu = build_family("nu:k=2,beta=1/2");
  CHECK(has_fact(nu, Prop::AlmostExchangeable));
  CHECK(same_distribution(nu.measure, nu_family(2, R("1/2"))));

  // Occupancy and forest constructions carry no symmetry facts.
  const BuiltMeasure urn = build_family("urn:n=2,m=2,p=1/2,1/2");
  CHECK(urn.facts.empty());
  CHECK(same_distribution(urn.measure,
                          urn_measure(UrnSpec{2, 2, {R("1/2"), R("1/2")}, {}})));
  const BuiltMeasure urn_thr = build_family("urn:n=2,m=2,p=1/2,1/2,a=2,1");
  CHECK(urn_thr.measure.weight(config_from_bitstring("01", 2)) == R("3/4"));

  const BuiltMeasure gadget = build_family("gadget:k=1");
  CHECK(gadget.facts.empty());
  CHECK(gadget.measure.support().size() == 7);
}

TEST_CASE("family grammar: file-backed specs") {
  const TempFile graph("triangle.json", R"({
    "vertices": ["a", "b", "c"],
    "edges": [["a", "b"], ["b", "c", "2"], ["c", "a", "3"]]
  })");
  const BuiltMeasure trees = build_family("trees:graph=@" + graph.path);
  CHECK(trees.measure.coords() == 3);
  CHECK(trees.measure.support().size() == 3);

  const TempFile matroid("matroid.json", R"({
    "ground": 2,
    "independent": ["00", "10", "01"]
  })");
  const BuiltMeasure mm = build_family("matroid:spec=@" + matroid.path);
  CHECK(mm.measure.coords() == 2);
  CHECK(mm.measure.support().size() == 3);

  CHECK(error_code_of([] {
          build_family("trees:graph=@/tmp/negdep_no_such_file.json");
        }) == ErrorCode::Io);
  CHECK(error_code_of([&] {
          build_family("trees:graph=" + graph.path);  // missing '@'
        }) == ErrorCode::Parse);
}

TEST_CASE("family grammar: rejects malformed specs") {
  CHECK(error_code_of([] { build_family("swizzle:n=3"); }) ==
        ErrorCode::Parse);
  CHECK(error_code_of([] { build_family("uniform"); }) == ErrorCode::Parse);
  CHECK(error_code_of([] { build_family("uniform:m=3"); }) ==
        ErrorCode::Parse);
  CHECK(error_code_of([] { build_family("uniform:n=3,n=4"); }) ==
        ErrorCode::Parse);
  CHECK(error_code_of([] { build_family("uniform:n=0"); }) ==
        ErrorCode::ParameterOutOfRange);
}

TEST_CASE("property tokens parse case-insensitively") {
  REQUIRE(parse_prop_token("nc").has_value());
  CHECK(parse_prop_token("nc")->p == Prop::NC);
  CHECK(parse_prop_token("NCplus")->p == Prop::NCplus);
  CHECK(parse_prop_token("ncPLUS")->p == Prop::NCplus);
  CHECK(parse_prop_token("almostexchangeable")->p == Prop::AlmostExchangeable);
  REQUIRE(parse_prop_token("lcm(5)").has_value());
  CHECK(parse_prop_token("lcm(5)")->p == Prop::LCm);
  CHECK(parse_prop_token("lcm(5)")->m == 5);
  CHECK_FALSE(parse_prop_token("negativity").has_value());
  CHECK_FALSE(parse_prop_token("lcm(x)").has_value());
}

TEST_CASE("run_property answers symmetry queries directly") {
  const RunOptions options{Budget{}, 0};
  const Measure nu = nu_family(2, R("1/2"));
  CHECK(run_property(nu, PropKey{Prop::Exchangeable, 0}, options).status ==
        Status::Fails);
  CHECK(run_property(nu, PropKey{Prop::AlmostExchangeable, 0}, options)
            .status == Status::Holds);
  const Measure prod = product_measure({R("1/2"), R("1/3"), R("1/4")});
  CHECK(run_property(prod, PropKey{Prop::ProductRescaling, 0}, options)
            .status == Status::Unknown);
}

TEST_CASE("check reports: ledger shape, derivations, determinism") {
  const BuiltMeasure input = build_family("nu:k=2,beta=1/2");
  const RunOptions options{Budget{}, 17};
  const std::vector<PropKey> props{PropKey{Prop::ULC, 0},
                                   PropKey{Prop::CNC, 0}};
  const Report report = run_check(input, props, options);

  CHECK(report.exit_code == 0);
  CHECK(report.body.at("command") == "check");
  CHECK(report.body.at("requested") ==
        nlohmann::json::array({"ULC", "CNC"}));
  CHECK(report.body.at("measure").at("coords") == 4);

  const nlohmann::json& props_json =
      report.body.at("ledger").at("properties");
  CHECK(props_json.at("ULC").at("status") == "holds");
  CHECK(props_json.at("CNC").at("status") == "fails");
  CHECK(props_json.at("CNC").at("provenance").at("kind") == "direct");
  CHECK(props_json.at("AlmostExchangeable").at("status") == "holds");
  // The lattice-condition failure propagates to the field-closed strengthening.
  CHECK(props_json.at("NCplus").at("status") == "fails");
  CHECK(props_json.at("NCplus").at("provenance").at("kind") == "derived");
  CHECK(report.body.contains("audit"));

  // Identical inputs produce byte-identical bodies (timings aside).
  const Report again = run_check(input, props, options);
  CHECK(report.body.dump() == again.body.dump());

  // full() merges verdicts with wall-clock timings.
  const nlohmann::json merged = report.full();
  CHECK(merged.contains("timings_ms"));
  CHECK(merged.at("command") == "check");
}

TEST_CASE("check reports: exhausted budgets surface as exit 4") {
  // Not symmetric, so the field-closed pair scan can only be falsified by
  // sampling; a definite answer never arrives.
  const BuiltMeasure input = build_family("product:p=1/2,1/3,1/4");
  const Report report = run_check(input, {PropKey{Prop::NAplus, 0}},
                                  RunOptions{Budget{50, 100}, 3});
  const nlohmann::json& entry =
      report.body.at("ledger").at("properties").at("NAplus");
  CHECK(entry.at("status") == "unknown");
  CHECK(report.exit_code == 4);
}

TEST_CASE("check reports: per-property domain errors are recorded, not thrown") {
  // Antipodal comparison needs an even coordinate count.
  const BuiltMeasure input = build_family("uniform:n=3");
  const Report report =
      run_check(input, {PropKey{Prop::APP, 0}}, RunOptions{Budget{}, 0});
  CHECK(report.exit_code == 0);
  const nlohmann::json& entry =
      report.body.at("ledger").at("properties").at("APP");
  CHECK(entry.at("status") == "unknown");
}

TEST_CASE("reproduce targets: pinned rows and unknown names") {
  const Report report = run_reproduce("prop41", {{"k", "2"}});
  CHECK(report.exit_code == 0);
  CHECK(report.body.at("target") == "prop41");
  CHECK(report.body.at("k") == 2);
  bool saw_gap_row = false;
  for (const nlohmann::json& row : report.body.at("rows")) {
    CHECK(row.at("pass") == true);
    if (row.at("id") == "e-gap-scp") saw_gap_row = true;
  }
  CHECK(saw_gap_row);

  const std::vector<std::string> targets = reproduce_targets();
  CHECK(targets.size() == 7);
  CHECK(error_code_of([] { run_reproduce("nonesuch", {}); }) ==
        ErrorCode::UnknownTarget);
  CHECK(error_code_of([] { run_reproduce("prop41", {{"q", "1"}}); }) ==
        ErrorCode::Parse);
}

TEST_CASE("search targets: deterministic bodies and unknown names") {
  const RunOptions options{Budget{}, 9};
  const Report a = run_search("cnc-vs-cna", {{"count", "60"}}, options);
  const Report b = run_search("cnc-vs-cna", {{"count", "60"}}, options);
  CHECK(a.body.at("target") == "cnc-vs-cna");
  CHECK(a.body.at("sampled") == 60);
  CHECK(a.body.dump() == b.body.dump());

  CHECK(search_targets().size() == 4);
  CHECK(error_code_of([&] { run_search("nonesuch", {}, options); }) ==
        ErrorCode::UnknownTarget);
}

TEST_CASE("evidence pool: deterministic, sized, and on-dimension") {
  const std::vector<Measure> pool = ncplus_evidence_pool(9, 4, 7);
  REQUIRE(pool.size() == 9);
  for (const Measure& m : pool) {
    CHECK(m.coords() == 4);
    CHECK(m.total_mass() > 0);
  }
  const std::vector<Measure> again = ncplus_evidence_pool(9, 4, 7);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    CHECK(pool[i].weights() == again[i].weights());
    CHECK(pool[i].label() == again[i].label());
  }
  CHECK(error_code_of([] { ncplus_evidence_pool(3, 1, 0); }) ==
        ErrorCode::ParameterOutOfRange);
}

TEST_CASE("random sparse measures respect their knobs") {
  Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    const Measure m = random_sparse_measure(rng, 3, 30, 4);
    CHECK(m.coords() == 3);
    CHECK(m.total_mass() > 0);
    for (Config c = 0; c < m.configs(); ++c) {
      const Rat& w = m.weight(c);
      CHECK(w >= 0);
      if (w != 0) {
        CHECK(w.get_num() <= 4);
        CHECK(w.get_den() <= 4);
      }
    }
  }
}
