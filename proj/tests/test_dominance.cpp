#include <doctest.h>

#include <string>
#include <vector>

#include "negdep/dominance.hpp"
#include "negdep/families.hpp"
#include "negdep/measure.hpp"
#include "negdep/report.hpp"
#include "negdep/rng.hpp"
#include "test_util.hpp"

using namespace negdep;
using negdep::testing::R;
using negdep::testing::coupling_matches;
using negdep::testing::dominates_by_upsets;
using negdep::testing::upset_mass_from_generators;

TEST_CASE("stochastic dominance: hand cases with verified couplings") {
  // Higher success probability dominates lower, coordinatewise.
  const Measure high = product_measure({R("3/4"), R("2/3")});
  const Measure low = product_measure({R("1/2"), R("1/3")});
  const DominanceResult d = stochastic_dominates(high, low);
  REQUIRE(d.dominates);
  REQUIRE(d.coupling.has_value());
  CHECK(coupling_matches(*d.coupling, high, low, /*single_step=*/false));

  // The reverse direction fails, with an up-set witness whose masses are
  // exactly reproducible from its minimal elements.
  const DominanceResult r = stochastic_dominates(low, high);
  REQUIRE_FALSE(r.dominates);
  REQUIRE_FALSE(r.coupling.has_value());
  const auto generators =
      r.violation.at("generators").get<std::vector<std::string>>();
  REQUIRE_FALSE(generators.empty());
  const Rat mu_mass = upset_mass_from_generators(low, generators);
  const Rat nu_mass = upset_mass_from_generators(high, generators);
  CHECK(mu_mass < nu_mass);
  CHECK(R(r.violation.at("mu_mass").get<std::string>()) == mu_mass);
  CHECK(R(r.violation.at("nu_mass").get<std::string>()) == nu_mass);

  // Every measure dominates itself via the identity coupling.
  const DominanceResult self = stochastic_dominates(high, high);
  REQUIRE(self.dominates);
  CHECK(coupling_matches(*self.coupling, high, high, false));
}

TEST_CASE("covering is strictly stronger than dominance") {
  // A point mass on 11 dominates a point mass on 00, but covering requires
  // single-coordinate steps, and this jump needs two.
  const Measure top(2, {Rat(0), Rat(0), Rat(0), Rat(1)});
  const Measure bottom(2, {Rat(1), Rat(0), Rat(0), Rat(0)});
  CHECK(stochastic_dominates(top, bottom).dominates);
  CHECK_FALSE(stochastically_covers(top, bottom).dominates);

  // A half-step up is covered.
  const Measure half(2, {R("1/2"), R("1/2"), Rat(0), Rat(0)});
  const Measure zero(2, {Rat(1), Rat(0), Rat(0), Rat(0)});
  const DominanceResult c = stochastically_covers(half, zero);
  REQUIRE(c.dominates);
  CHECK(coupling_matches(*c.coupling, half, zero, /*single_step=*/true));
}

TEST_CASE("covers built by construction are recognized, with valid couplings") {
  // Start from a random lower measure and push at most one coordinate up in
  // each atom; the result must cover the original.
  Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const Measure lower = random_sparse_measure(rng, 3, 30, 6);
    std::vector<Rat> upper_w(8, Rat(0));
    for (Config c = 0; c < 8; ++c) {
      if (lower.weight(c) == 0) continue;
      Config up = c;
      const int coord = static_cast<int>(rng.uniform(0, 2));
      if (rng.uniform(0, 1) == 0) up |= Config(1) << coord;
      upper_w[up] += lower.weight(c);
    }
    const Measure upper(3, upper_w);
    const DominanceResult c = stochastically_covers(upper, lower);
    REQUIRE(c.dominates);
    CHECK(coupling_matches(*c.coupling, upper, lower, true));
    // Covering implies dominance.
    CHECK(stochastic_dominates(upper, lower).dominates);
  }
}

TEST_CASE("max-flow dominance agrees with the exhaustive up-set oracle") {
  Rng rng(555);
  for (int trial = 0; trial < 200; ++trial) {
    const Measure a = random_sparse_measure(rng, 3, 30, 6);
    const Measure b = random_sparse_measure(rng, 3, 30, 6);
    const DominanceResult d = stochastic_dominates(a, b);
    CHECK(d.dominates == dominates_by_upsets(a, b));
    if (d.dominates) {
      CHECK(coupling_matches(*d.coupling, a, b, false));
    } else {
      const auto generators =
          d.violation.at("generators").get<std::vector<std::string>>();
      REQUIRE_FALSE(generators.empty());
      CHECK(upset_mass_from_generators(a, generators) <
            upset_mass_from_generators(b, generators));
    }
  }
}

TEST_CASE("level-monotone dominance on the two-block family") {
  // Threshold beta^2 >= (k-1)/(k+1) at k = 3: holds at 3/4, fails at 7/10.
  CHECK(check_NMP(nu_family(3, R("3/4"))).status == Status::Holds);
  const Verdict bad = check_NMP(nu_family(3, R("7/10")));
  REQUIRE(bad.status == Status::Fails);
  // The witness names two levels l > k and an up-set with less conditional
  // mass on the higher level; replay it exactly.
  const int l = bad.detail.at("l").get<int>();
  const int k = bad.detail.at("k").get<int>();
  CHECK(l > k);
  const auto generators =
      bad.detail.at("generators").get<std::vector<std::string>>();
  const Measure nu = nu_family(3, R("7/10"));
  std::vector<Rat> level_l(7, Rat(0)), level_k(7, Rat(0));
  level_l[l] = 1;
  level_k[k] = 1;
  const Rat mass_l =
      upset_mass_from_generators(rank_rescale(nu, level_l), generators);
  const Rat mass_k =
      upset_mass_from_generators(rank_rescale(nu, level_k), generators);
  CHECK(mass_l < mass_k);
  CHECK(R(bad.detail.at("mu_mass").get<std::string>()) == mass_l);
  CHECK(R(bad.detail.at("nu_mass").get<std::string>()) == mass_k);
}

TEST_CASE("level-monotone dominance is invariant under rank rescaling") {
  // Rescaling level masses leaves every level-conditional measure unchanged,
  // so the verdict must not move.
  Rng rng(31);
  int compared = 0;
  for (int trial = 0; trial < 40 && compared < 25; ++trial) {
    const Measure m = random_sparse_measure(rng, 4, 35, 6);
    std::vector<Rat> a(5);
    for (Rat& q : a) q = rng.positive_rational(5);
    const Measure rescaled = rank_rescale(m, a);
    const Status before = check_NMP(m).status;
    const Status after = check_NMP(rescaled).status;
    CHECK(before == after);
    ++compared;
  }
  CHECK(compared == 25);
}

TEST_CASE("conditional covering thresholds on the two-block family") {
  // k = 2 pivots on beta + beta^2 >= 1, strictly weaker than the
  // level-monotonicity threshold beta^2 >= 1/3 at the same k.
  const Verdict below = check_SCP(nu_family(2, R("309/500")));
  REQUIRE(below.status == Status::Fails);
  // The deficiency witness is exact: a set of configurations whose mass
  // exceeds its neighborhood's.
  CHECK(R(below.detail.at("lower_mass").get<std::string>()) >
        R(below.detail.at("upper_neighborhood_mass").get<std::string>()));
  CHECK(check_SCP(nu_family(2, R("619/1000"))).status == Status::Holds);
  // beta = 309/500 still satisfies the level-monotonicity threshold:
  // beta^2 = 95481/250000 >= 1/3.
  CHECK(check_NMP(nu_family(2, R("309/500"))).status == Status::Holds);

  // k = 3 follows the beta^2 >= (k-1)/(k+1) threshold exactly.
  CHECK(check_SCP(nu_family(3, R("707/1000"))).status == Status::Fails);
  CHECK(check_SCP(nu_family(3, R("708/1000"))).status == Status::Holds);
}
