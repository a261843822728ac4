#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "oracles.hpp"
#include "sipkit/refine.hpp"

using namespace sipkit;

namespace {

PlusFn range_stream(int lo, int hi) {
  std::vector<BigInt> v;
  for (int t = lo; t <= hi; ++t) v.push_back(t);
  return PlusFn::from_values(std::move(v));
}

}  // namespace

TEST_CASE("streams materialize on demand and validate their shape") {
  PlusFn p = PlusFn::powers_of_three();
  CHECK(p.stored() == 0);
  CHECK(p.at(1) == 3);
  CHECK(p.at(3) == 27);
  CHECK(p.stored() == 3);
  CHECK(p.prefix(2) == std::vector<BigInt>{3, 9});
  CHECK_FALSE(p.ended());
  CHECK_THROWS_AS(p.at(0), std::invalid_argument);

  PlusFn s = PlusFn::scaled_powers_of_three(5, 2, 2);
  CHECK(s.at(1) == 45);    // 5 * 3^2
  CHECK(s.at(2) == 405);   // 5 * 3^4

  PlusFn a = PlusFn::arithmetic(2, 5);
  CHECK(a.prefix(3) == std::vector<BigInt>{2, 7, 12});

  CHECK_THROWS_AS(PlusFn::from_values({3, 3}), std::invalid_argument);
  CHECK_THROWS_AS(PlusFn::from_values({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(PlusFn::arithmetic(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(PlusFn::scaled_powers_of_three(0), std::invalid_argument);
  CHECK_THROWS_AS(
      PlusFn::from_producer([] { return std::optional<BigInt>(7); }).prefix(2),
      std::invalid_argument);  // producer repeats a value
}

TEST_CASE("finite streams end and report exhaustion") {
  PlusFn p = PlusFn::from_values({4, 8});
  CHECK(p.ended());  // no producer behind the values
  CHECK(p.extends_to(2));
  CHECK_FALSE(p.extends_to(3));
  try {
    p.at(3);
    FAIL("expected SourceExhausted");
  } catch (const SourceExhausted& e) {
    CHECK(e.produced() == 2);
    CHECK_FALSE(e.budget_limited());
  }

  PlusFn d = PlusFn();
  CHECK(d.ended());
  CHECK(d.stored() == 0);
  CHECK_THROWS_AS(d.at(1), SourceExhausted);
}

TEST_CASE("copies share one cache; views shift it") {
  PlusFn a = PlusFn::powers_of_three();
  PlusFn b = a;
  CHECK(b.at(3) == 27);
  CHECK(a.stored() == 3);  // the pull through b is visible in a

  PlusFn v = a.drop_first(2);
  CHECK(v.at(1) == a.at(3));
  CHECK(v.stored() == 1);
  CHECK(v.stored_values() == std::vector<BigInt>{27});
  CHECK_THROWS_AS(a.drop_first(-1), std::invalid_argument);
}

TEST_CASE("pull limits impose a budgeted end") {
  PlusFn c = PlusFn::powers_of_three().with_pull_limit(2);
  CHECK(c.at(2) == 9);
  CHECK_FALSE(c.extends_to(3));
  CHECK(c.ended());
  CHECK(c.ended_by_budget());
  try {
    c.at(3);
    FAIL("expected SourceExhausted");
  } catch (const SourceExhausted& e) {
    CHECK(e.produced() == 2);
    CHECK(e.budget_limited());
  }
}

TEST_CASE("signed sums match the closure route") {
  IntSet s = signed_sums({3, 9});
  CHECK(s.values() ==
        std::vector<BigInt>{-12, -9, -6, -3, 0, 3, 6, 9, 12});
  CHECK(s == sip_closure(IntSet(std::vector<BigInt>{3, 9})));
  CHECK(signed_sums({}).values() == std::vector<BigInt>{0});
}

TEST_CASE("divisible subsequences are preferred by the level step") {
  RefineStep r = refine_beyond(range_stream(1, 30), 1, {5, 1000, 0});
  CHECK(r.used == RefineCase::subsequence);
  CHECK(r.level == 1);
  CHECK(r.delta == 0);
  CHECK(r.refined.prefix(5) == std::vector<BigInt>{3, 6, 9, 12, 15});
  // The committed rule keeps producing past the request.
  CHECK(r.refined.at(6) == 18);
  CHECK(r.refined.at(10) == 30);
  CHECK_THROWS_AS(r.refined.at(11), SourceExhausted);
}

TEST_CASE("a digit-class of triple sums is used when divisibles are scarce") {
  // 1, 4, 7, ... all sit in the +1 class mod 3: no divisible values at all.
  RefineStep r = refine_beyond(PlusFn::arithmetic(1, 3), 1, {3, 1000, 50});
  CHECK(r.used == RefineCase::triple_sums);
  CHECK(r.level == 1);
  CHECK(r.delta == +1);
  CHECK(r.refined.prefix(3) == std::vector<BigInt>{12, 39, 66});
  // Continuation resumes after the 50-element probe window: the next triple
  // is drawn from source positions 51..53, i.e. 151 + 154 + 157.
  CHECK(r.refined.at(4) == 462);
}

TEST_CASE("levels above one require the previous level's divisibility") {
  RefineStep r = refine_beyond(PlusFn::arithmetic(9, 9), 2, {2, 100, 0});
  CHECK(r.used == RefineCase::subsequence);
  CHECK(r.refined.prefix(2) == std::vector<BigInt>{9, 18});

  CHECK_THROWS_AS(refine_beyond(PlusFn::arithmetic(1, 1), 2, {2, 100, 0}),
                  std::domain_error);
}

TEST_CASE("refine parameter validation and exhaustion") {
  CHECK_THROWS_AS(refine_beyond(range_stream(1, 9), 0, {2, 100, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(refine_beyond(range_stream(1, 9), 1, {0, 100, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(refine_beyond(range_stream(1, 9), 1, {2, 0, 0}),
                  std::invalid_argument);
  // Three values in the +1 class support one triple sum, not five.
  try {
    refine_beyond(PlusFn::from_values({1, 4, 7}), 1, {5, 1000, 2});
    FAIL("expected SourceExhausted");
  } catch (const SourceExhausted& e) {
    CHECK(e.produced() == 1);
    CHECK_FALSE(e.budget_limited());
  }
}

TEST_CASE("refined streams stay inside the source's subset sums") {
  // Lazy sources keep the stored prefixes small enough for the closure cap.
  PlusFn src1 = PlusFn::arithmetic(1, 1);
  RefineStep r1 = refine_beyond(src1, 1, {4, 1000, 0});
  r1.refined.prefix(4);
  CHECK(is_refinement(r1.refined, src1));

  PlusFn src2 = PlusFn::arithmetic(1, 3);
  RefineStep r2 = refine_beyond(src2, 1, {3, 1000, 10});
  r2.refined.prefix(3);
  CHECK(is_refinement(r2.refined, src2));

  CHECK_FALSE(is_refinement(PlusFn::from_values({5}), PlusFn::from_values({3, 9})));
}

TEST_CASE("witness construction certifies shape") {
  SipWitness w = SipWitness::from_parts(2, {9, 81});
  CHECK(w.t0 == 2);
  CHECK(w.block_type == SignType::positive);

  // Translate must be positive.
  CHECK_THROWS_AS(SipWitness::from_parts(0, {9}), std::invalid_argument);
  // At least one block.
  CHECK_THROWS_AS(SipWitness::from_parts(1, {}), std::invalid_argument);
  // First block must clear the translate's digits.
  CHECK_THROWS_AS(SipWitness::from_parts(3, {3}), std::invalid_argument);
  // Blocks must keep ascending beyond one another.
  CHECK_THROWS_AS(SipWitness::from_parts(1, {27, 9}), std::invalid_argument);
  CHECK_THROWS_AS(SipWitness::from_parts(1, {9, 12}), std::invalid_argument);
  // 162 = -81 + 243 flips sign relative to 9.
  CHECK_THROWS_AS(SipWitness::from_parts(1, {9, 162}), std::invalid_argument);
}

TEST_CASE("translated positive values of a witness") {
  SipWitness w = SipWitness::from_parts(2, {9, 81});
  CHECK(w.translated_sip_positive().values() ==
        std::vector<BigInt>{2, 11, 74, 83, 92});
  CHECK(w.translated_sip_positive(1).values() == std::vector<BigInt>{2, 11});
  CHECK_THROWS_AS(w.translated_sip_positive(0), std::invalid_argument);
  for (const BigInt& v : w.translated_sip_positive().values()) CHECK(v > 0);
}

TEST_CASE("witness builder: power streams") {
  SipWitness w = build_sip_witness(0, PlusFn::powers_of_three(), 7);
  CHECK(w.t0 == 3);
  CHECK(w.block_type == SignType::positive);
  std::vector<BigInt> want;
  for (int e = 3; e <= 15; e += 2) want.push_back(pow3(e));
  CHECK(w.blocks == want);

  SipWitness v = build_sip_witness(-5, PlusFn::powers_of_three(), 4);
  CHECK(v.t0 == 7);  // -5 + 3 + 9
  CHECK(v.blocks == std::vector<BigInt>{81, 729, 6561, 59049});

  CHECK_THROWS_AS(build_sip_witness(0, PlusFn::powers_of_three(), 0),
                  std::invalid_argument);
}

TEST_CASE("witness builder: the sign type follows the stream's scale") {
  // 5 = -1 - 3 + 9 opens and closes with opposite signs.
  SipWitness w = build_sip_witness(0, PlusFn::scaled_powers_of_three(5), 3);
  CHECK(w.t0 == 15);
  CHECK(w.blocks.front() == 1215);  // 5 * 3^5
  CHECK(w.block_type == SignType::negative);

  SipWitness v = build_sip_witness(0, PlusFn::scaled_powers_of_three(7), 3);
  CHECK(v.block_type == SignType::positive);
}

TEST_CASE("residue cycle of the all-powers witness") {
  std::vector<BigInt> blocks;
  for (int e = 1; e <= 7; ++e) blocks.push_back(pow3(e));
  SipWitness w = SipWitness::from_parts(1, std::move(blocks));

  ResidueCycle c = build_residue_cycle(w, 3);
  CHECK(c.s == std::vector<BigInt>{3280, 3262, 3100});
  CHECK(c.z == std::vector<int>{0, 2, 4});
  CHECK(c.residues == std::vector<int>{0, 2, 1});
  CHECK(c.covers_all_residues);
  CHECK(c.steps_match_type);

  CHECK_THROWS_AS(build_residue_cycle(w, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_residue_cycle(w, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_residue_cycle(w, 5), std::invalid_argument);  // needs 11
}

TEST_CASE("residue cycles of negative-type witnesses step downward") {
  SipWitness w = build_sip_witness(0, PlusFn::scaled_powers_of_three(2), 7);
  REQUIRE(w.block_type == SignType::negative);
  ResidueCycle c = build_residue_cycle(w, 3);
  CHECK(c.covers_all_residues);
  CHECK(c.steps_match_type);
  for (std::size_t i = 1; i < c.z.size(); ++i) CHECK(c.z[i] - c.z[i - 1] == -2);
}
