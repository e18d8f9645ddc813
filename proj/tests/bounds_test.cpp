#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "powerfree/bounds.hpp"
#include "powerfree/enumerate.hpp"
#include "powerfree/morphism.hpp"

using namespace powerfree;

#ifndef POWERFREE_DATA_DIR
#error "POWERFREE_DATA_DIR must point at the bundled data files"
#endif

namespace {
const std::string kDataDir = POWERFREE_DATA_DIR;

KpfCertificate forged(const std::string& file, int k) {
  MorphismFile mf = load_morphism_json(kDataDir + "/morphisms/" + file);
  return KpfCertificate{mf.morphism, k, "assumed for the test", true};
}

Word bword(const std::string& s) { return Word::parse(Alphabet(2), s); }
}  // namespace

TEST_CASE("substitution set bound formula") {
  CHECK(brinkhuis_bound(2, 9).value ==
        doctest::Approx(std::log(2.0) / 8).epsilon(1e-15));
  CHECK(brinkhuis_bound(5, 15).value ==
        doctest::Approx(std::log(5.0) / 14).epsilon(1e-15));
  CHECK(brinkhuis_bound(2, 18).value ==
        doctest::Approx(std::log(2.0) / 17).epsilon(1e-15));
  CHECK(brinkhuis_bound(65, 41).value ==
        doctest::Approx(std::log(65.0) / 40).epsilon(1e-15));
  CHECK(brinkhuis_bound(110, 43).value ==
        doctest::Approx(std::log(110.0) / 42).epsilon(1e-15));
  CHECK(brinkhuis_bound(2, 9).kind == EntropyBound::Kind::lower);
  CHECK_THROWS_AS(brinkhuis_bound(0, 9), Error);
  CHECK_THROWS_AS(brinkhuis_bound(2, 1), Error);
}

TEST_CASE("morphism lower bound") {
  KpfCertificate cert = forged("cubefree_9uniform_4to2.json", 3);
  EntropyBound b = lower_bound_from_morphism(cert, 2);
  CHECK(b.kind == EntropyBound::Kind::lower);
  CHECK(b.value == doctest::Approx(std::log(2.0) / 8).epsilon(1e-15));

  KpfCertificate unverified = cert;
  unverified.verified = false;
  CHECK_THROWS_AS(lower_bound_from_morphism(unverified, 2), Error);
  // source size 4 is not 3 * target size 2
  CHECK_THROWS_AS(lower_bound_from_morphism(cert, 3), Error);
}

TEST_CASE("morphism lower bound with frequencies") {
  auto [f9, b9] = lower_bound_with_frequencies(
      forged("cubefree_9uniform_4to2.json", 3), 2);
  CHECK(f9 == std::vector<BigRat>{BigRat(1, 2), BigRat(1, 2)});
  CHECK(b9.value == doctest::Approx(std::log(2.0) / 8).epsilon(1e-15));

  auto [f13, b13] = lower_bound_with_frequencies(
      forged("cubefree_13uniform_4to2.json", 3), 2);
  CHECK(f13 == std::vector<BigRat>{BigRat(7, 13), BigRat(6, 13)});
  CHECK(b13.value == doctest::Approx(std::log(2.0) / 12).epsilon(1e-15));
  // the published account of this construction quotes twice this value;
  // the note records the discrepancy
  REQUIRE(b13.provenance.note.has_value());
  CHECK(b13.provenance.note->find("0.115525") != std::string::npos);

  // letter statistics differing within a group are rejected
  Alphabet binary(2);
  Morphism bad(Alphabet(4), binary,
               {bword("0011"), bword("0111"), bword("0011"), bword("0011")});
  KpfCertificate cert{bad, 3, "assumed for the test", true};
  CHECK_THROWS_AS(lower_bound_with_frequencies(cert, 2), Error);
}

TEST_CASE("substitution set verification accepts the thue-morse pair") {
  BrinkhuisCandidate cand{Alphabet(2), {{bword("01")}, {bword("10")}}};
  BrinkhuisOutcome out = verify_brinkhuis(cand, FreenessSpec(3), 10);
  CHECK(!out.refuted);
  CHECK(out.verified_length == 10);
  CHECK(!out.word.has_value());
}

TEST_CASE("substitution set verification refutes deterministically") {
  BrinkhuisCandidate cand{Alphabet(2), {{bword("00")}, {bword("10")}}};
  EnumerationOptions one;
  one.workers = 1;
  EnumerationOptions four;
  four.workers = 4;
  BrinkhuisOutcome a = verify_brinkhuis(cand, FreenessSpec(3), 10, one);
  BrinkhuisOutcome b = verify_brinkhuis(cand, FreenessSpec(3), 10, four);
  REQUIRE(a.refuted);
  REQUIRE(b.refuted);
  REQUIRE(a.word.has_value());
  CHECK(a.word->str() == b.word->str());
  CHECK(a.assignment == b.assignment);
  CHECK(a.word->str() == "00");
  CHECK(a.assignment == std::vector<int>{0, 0});
}

TEST_CASE("substitution sets with real choices") {
  // both clauses map to cubefree words but mixing creates a cube
  BrinkhuisCandidate cand{
      Alphabet(2),
      {{bword("010"), bword("011")}, {bword("101"), bword("100")}}};
  BrinkhuisOutcome out = verify_brinkhuis(cand, FreenessSpec(3), 8);
  CHECK(out.refuted);  // 010 . 010 already repeats, 0 -> 010, 0 -> 010
}

TEST_CASE("substitution set validation and budget") {
  BrinkhuisCandidate ragged{Alphabet(2), {{bword("01")}}};
  CHECK_THROWS_AS(verify_brinkhuis(ragged, FreenessSpec(3), 5), Error);

  BrinkhuisCandidate uneven{Alphabet(2),
                            {{bword("01")}, {bword("100")}}};
  CHECK_THROWS_AS(verify_brinkhuis(uneven, FreenessSpec(3), 5), Error);

  BrinkhuisCandidate ok{Alphabet(2), {{bword("01")}, {bword("10")}}};
  EnumerationOptions tiny;
  tiny.node_budget = 3;
  CHECK_THROWS_AS(verify_brinkhuis(ok, FreenessSpec(3), 20, tiny), Error);
}

TEST_CASE("reference constants registry") {
  const std::vector<ReferenceConstant>& table = reference_constants();
  CHECK(table.size() == 20);
  std::set<std::string> keys;
  for (const ReferenceConstant& c : table) {
    CHECK(keys.insert(c.key).second);
    CHECK((c.language == "binary-cubefree" ||
           c.language == "ternary-squarefree"));
    CHECK(c.value > 0.0);
    CHECK(!c.citation.empty());
  }
  // spot checks
  bool saw_brandenburg_lower = false;
  for (const ReferenceConstant& c : table)
    if (c.key == "brandenburg-1983-binary-cubefree-entropy-lower") {
      saw_brandenburg_lower = true;
      CHECK(c.value == doctest::Approx(std::log(2.0) / 9).epsilon(1e-12));
      CHECK(c.exact == "ln(2)/9");
    }
  CHECK(saw_brandenburg_lower);
}

TEST_CASE("registry matches the bundled data file") {
  std::ifstream in(kDataDir + "/reference_constants.json");
  REQUIRE(in.good());
  nlohmann::json j = nlohmann::json::parse(in);
  const std::vector<ReferenceConstant>& table = reference_constants();
  REQUIRE(j.size() == table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(j[i]["key"] == table[i].key);
    CHECK(j[i]["quantity"] == table[i].quantity);
    CHECK(j[i]["language"] == table[i].language);
    CHECK(j[i]["value"].get<double>() ==
          doctest::Approx(table[i].value).epsilon(1e-9));
    CHECK(j[i]["exact"] == table[i].exact);
    CHECK(j[i]["citation"] == table[i].citation);
  }
}

TEST_CASE("frequency bounds from counts and morphisms") {
  JointCountTable joint = count_joint(FreenessSpec(3), Alphabet(2), 3);
  KpfCertificate tm = certify_kpowerfree(Morphism::thue_morse(), 3);
  std::vector<FrequencyBound> bounds =
      frequency_bounds_from_enumeration_and_morphisms(joint, {tm});
  REQUIRE(bounds.size() == 2);
  CHECK(bounds[0].quantity == "f(0)");
  CHECK(*bounds[0].lower == BigRat(1, 3));
  CHECK(*bounds[0].upper == BigRat(2, 3));
  CHECK(bounds[1].quantity == "f_min");
  CHECK(*bounds[1].lower == BigRat(1, 3));
  CHECK(*bounds[1].upper == BigRat(1, 2));

  // no morphisms: only the window
  CHECK(frequency_bounds_from_enumeration_and_morphisms(joint, {}).size() ==
        1);

  // binary squarefree words of length 4 do not exist
  JointCountTable empty = count_joint(FreenessSpec(2), Alphabet(2), 4);
  CHECK_THROWS_AS(frequency_bounds_from_enumeration_and_morphisms(empty, {}),
                  Error);

  KpfCertificate fake{Morphism::thue_morse(), 3, "unverified", false};
  CHECK_THROWS_AS(
      frequency_bounds_from_enumeration_and_morphisms(joint, {fake}), Error);
}

TEST_CASE("count-based upper bound consistency with the registry") {
  // ln b(80)/80 lies between the best published lower and upper entropy
  CountTable fixture = load_count_fixture(
      kDataDir + "/binary_cubefree_counts.csv", FreenessSpec(3), Alphabet(2));
  EntropyBound upper = entropy_upper_from_count(80, fixture.at(80));
  double kolpakov = 0.37676;
  CHECK(upper.value > kolpakov);
  CHECK(upper.value == doctest::Approx(0.389855).epsilon(5e-6 / 0.389855));
}
