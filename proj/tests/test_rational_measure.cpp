#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "negdep/errors.hpp"
#include "negdep/families.hpp"
#include "negdep/measure.hpp"
#include "negdep/measure_io.hpp"
#include "negdep/rational.hpp"
#include "test_util.hpp"

using namespace negdep;
using negdep::testing::R;
using negdep::testing::error_code_of;
using negdep::testing::same_distribution;

TEST_CASE("rational parsing is exact and canonical") {
  CHECK(parse_rational("1/2") == Rat(1, 2));
  CHECK(parse_rational("2/4") == Rat(1, 2));
  CHECK(parse_rational("-3/6") == -Rat(1, 2));
  CHECK(parse_rational("7") == Rat(7));
  CHECK(parse_rational("+7") == Rat(7));
  CHECK(parse_rational("0") == Rat(0));
  CHECK(format_rational(parse_rational("14/21")) == "2/3");
  CHECK(format_rational(Rat(5)) == "5");
  CHECK(format_rational(Rat(0)) == "0");
  // Round trip through text is the identity on canonical forms.
  for (const char* s : {"0", "1", "1/2", "-9/7", "123456789012345678901/7"}) {
    CHECK(format_rational(parse_rational(s)) == s);
  }
}

TEST_CASE("rational parsing rejects what it must") {
  CHECK(error_code_of([] { parse_rational(""); }) == ErrorCode::Parse);
  CHECK(error_code_of([] { parse_rational("1/0"); }) == ErrorCode::Parse);
  CHECK(error_code_of([] { parse_rational("0.5"); }) == ErrorCode::Parse);
  CHECK(error_code_of([] { parse_rational("a/b"); }) == ErrorCode::Parse);
  CHECK(error_code_of([] { parse_rational("1/2/3"); }) == ErrorCode::Parse);
  CHECK(error_code_of([] { parse_rational("1e3"); }) == ErrorCode::Parse);
  CHECK(error_code_of([] { parse_rational(" 1"); }) == ErrorCode::Parse);
}

TEST_CASE("binomial and denominator clearing") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(46, 23) == Int("8233430727600"));
  CHECK(binomial(4, 5) == 0);
  CHECK(binomial(4, -1) == 0);
  CHECK(common_denominator({R("1/2"), R("1/3"), R("5")}) == 6);
  const std::vector<Int> cleared = cleared_integers({R("1/2"), R("1/3"), R("5")});
  CHECK(cleared == std::vector<Int>{3, 2, 30});
}

TEST_CASE("measure basics: mass, support, normalization") {
  Measure m(2, {R("1/2"), R("1/4"), R("0"), R("1/4")}, "demo");
  CHECK(m.coords() == 2);
  CHECK(m.configs() == 4);
  CHECK(m.total_mass() == 1);
  CHECK(m.is_normalized());
  CHECK(m.support() == std::vector<Config>{0, 1, 3});
  CHECK(m.label() == "demo");

  Measure raw(1, {Rat(3), Rat(9)});
  CHECK(raw.total_mass() == 12);
  const Measure norm = normalize(raw);
  CHECK(norm.weight(0) == R("1/4"));
  CHECK(norm.weight(1) == R("3/4"));
  CHECK(error_code_of([] { normalize(Measure(1, {Rat(0), Rat(0)})); }) ==
        ErrorCode::ZeroMass);
}

TEST_CASE("conditioning renormalizes on the free coordinates") {
  // Uniform on 3 coordinates; fixing one leaves uniform on the other two.
  Measure u3(3, std::vector<Rat>(8, Rat(1)));
  Assignment fix_first;
  fix_first.fix(0, 1);
  const Relabeled r = condition(u3, fix_first);
  CHECK(r.kept == std::vector<int>{1, 2});
  CHECK(r.measure.coords() == 2);
  CHECK(r.measure.is_normalized());
  for (Config c = 0; c < 4; ++c) CHECK(r.measure.weight(c) == R("1/4"));

  // Conditioning on a zero-probability slice is an error, not a silent zero.
  Measure point(2, {Rat(1), Rat(0), Rat(0), Rat(0)});
  Assignment impossible;
  impossible.fix(1, 1);
  CHECK(error_code_of([&] { condition(point, impossible); }) ==
        ErrorCode::ZeroProbabilityCondition);
}

TEST_CASE("projection preserves total mass without normalizing") {
  Measure m(3, {Rat(1), Rat(2), Rat(3), Rat(4), Rat(5), Rat(6), Rat(7), Rat(8)});
  const Relabeled r = project(m, {0, 2});
  CHECK(r.kept == std::vector<int>{0, 2});
  CHECK(r.measure.total_mass() == m.total_mass());
  // Marginal over the dropped middle coordinate: w'(b0, b2) sums both b1.
  CHECK(r.measure.weight(0) == Rat(1) + Rat(3));   // 000 + 010
  CHECK(r.measure.weight(1) == Rat(2) + Rat(4));   // 100 + 110
  CHECK(r.measure.weight(2) == Rat(5) + Rat(7));   // 001 + 011
  CHECK(r.measure.weight(3) == Rat(6) + Rat(8));   // 101 + 111
}

TEST_CASE("external fields tilt, condition, and validate") {
  // Finite positive field: pure tilt, nothing dropped, result normalized.
  const Measure prod = product_measure({R("1/2"), R("1/2")});
  ExternalField w;
  w.entries = {FieldEntry::finite(Rat(2)), FieldEntry::finite(Rat(1))};
  const Relabeled tilted = impose_field(prod, w);
  CHECK(tilted.kept == std::vector<int>{0, 1});
  CHECK(tilted.measure.is_normalized());
  // First coordinate's success odds double: P(eta_1 = 1) = 2/3.
  Rat first(0);
  for (Config c : {Config(1), Config(3)}) first += tilted.measure.weight(c);
  CHECK(first == R("2/3"));

  // An infinite entry conditions on eta_i = 1 and drops the coordinate.
  ExternalField winf;
  winf.entries = {FieldEntry::inf(), FieldEntry::finite(Rat(1))};
  const Relabeled conditioned = impose_field(prod, winf);
  CHECK(conditioned.kept == std::vector<int>{1});
  CHECK(conditioned.measure.coords() == 1);
  CHECK(conditioned.measure.weight(0) == R("1/2"));
  CHECK(conditioned.measure.weight(1) == R("1/2"));

  // A zero entry conditions on eta_i = 0.
  ExternalField wzero;
  wzero.entries = {FieldEntry::finite(Rat(0)), FieldEntry::finite(Rat(3))};
  const Relabeled zeroed = impose_field(prod, wzero);
  CHECK(zeroed.kept == std::vector<int>{1});
  CHECK(zeroed.measure.weight(1) == R("3/4"));

  CHECK(ExternalField::ones(3).all_finite_positive());
  CHECK_FALSE(wzero.all_finite_positive());
  CHECK(error_code_of([&] { impose_field(prod, ExternalField::ones(3)); })
            .has_value());
}

TEST_CASE("rank sequences and rank rescaling") {
  Measure u3(3, std::vector<Rat>(8, Rat(1)));
  const RankSequence rs = rank_sequence(u3);
  CHECK(rs.levels() == 3);
  CHECK(rs.r == std::vector<Rat>{R("1/8"), R("3/8"), R("3/8"), R("1/8")});

  // Rescaling by the indicator of levels {1, 2} conditions on those levels.
  const Measure mid = rank_rescale(u3, {Rat(0), Rat(1), Rat(1), Rat(0)});
  CHECK(mid.is_normalized());
  CHECK(mid.weight(0) == 0);
  CHECK(mid.weight(7) == 0);
  CHECK(mid.weight(1) == R("1/6"));
  CHECK(mid.weight(3) == R("1/6"));
  CHECK(error_code_of([&] {
          rank_rescale(u3, {Rat(0), Rat(0), Rat(0), Rat(0)});
        }) == ErrorCode::ZeroMass);
}

TEST_CASE("complement measure reverses the cube") {
  Measure m(2, {Rat(1), Rat(2), Rat(3), Rat(4)});
  const Measure c = complement_measure(m);
  CHECK(c.weight(0) == Rat(4));
  CHECK(c.weight(1) == Rat(3));
  CHECK(c.weight(2) == Rat(2));
  CHECK(c.weight(3) == Rat(1));
  CHECK(c.total_mass() == m.total_mass());
  // Involution.
  CHECK(same_distribution(complement_measure(c), m));
}

TEST_CASE("symmetry detection: exchangeable, almost exchangeable, neither") {
  const Measure uniform = product_measure({R("1/2"), R("1/2"), R("1/2")});
  CHECK(symmetry_type(uniform).kind == SymmetryType::Exchangeable);

  const Measure nu = nu_family(2, R("1/2"));
  const SymmetryType st = symmetry_type(nu);
  CHECK(st.kind == SymmetryType::AlmostExchangeable);
  CHECK(st.pivot == 0);

  const Measure skew = product_measure({R("1/2"), R("1/3"), R("1/4")});
  CHECK(symmetry_type(skew).kind == SymmetryType::Neither);

  // With only two coordinates, removing either one leaves a single
  // coordinate, so every 2-coordinate measure is at least almost
  // exchangeable.
  const Measure pair = product_measure({R("1/2"), R("1/3")});
  CHECK(symmetry_type(pair).kind != SymmetryType::Neither);
}

TEST_CASE("bitstring convention: coordinate 1 is the leftmost character") {
  CHECK(config_from_bitstring("10", 2) == 1);
  CHECK(config_from_bitstring("01", 2) == 2);
  CHECK(config_from_bitstring("0011", 4) == 12);
  CHECK(config_to_bitstring(1, 2) == "10");
  CHECK(config_to_bitstring(12, 4) == "0011");
  CHECK(error_code_of([] { config_from_bitstring("102", 3); }) ==
        ErrorCode::Parse);
  CHECK(error_code_of([] { config_from_bitstring("10", 3); }) ==
        ErrorCode::Parse);
}

TEST_CASE("measure wire format round trips exactly") {
  const Measure nu = nu_family(2, R("1/2"));
  const Measure back = measure_from_json(measure_to_json(nu));
  CHECK(same_distribution(nu, back));
  CHECK(back.total_mass() == nu.total_mass());

  // Omitted configurations are zero; support has no zero entries.
  const nlohmann::json j = measure_to_json(nu);
  CHECK(j.at("n") == 4);
  CHECK(j.at("weights").size() == nu.support().size());

  // Malformed input is rejected with a parse error.
  CHECK(error_code_of([] {
          measure_from_json_text(R"({"n": 2, "weights": [{"set": "10", "w": "1/4"},
                                                    {"set": "10", "w": "1/4"}]})");
        }) == ErrorCode::Parse);
  CHECK(error_code_of([] {
          measure_from_json_text(R"({"n": 2, "weights": [{"set": "103", "w": "1"}]})");
        }) == ErrorCode::Parse);
  CHECK(error_code_of([] {
          measure_from_json_text(R"({"n": 0, "weights": []})");
        }).has_value());
}
