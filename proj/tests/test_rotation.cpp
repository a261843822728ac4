#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "sipkit/rotation.hpp"

using namespace sipkit;

namespace {

Rational rat(long long n, long long d) { return Rational(n, d); }

ArcSet sym_eighth() { return ArcSet::interval(rat(-1, 8), rat(1, 8)); }

ArcSet half_eighth() { return ArcSet::interval(Rational(0), rat(1, 8), true, false); }

std::vector<long long> to_longs(const IntSet& s) {
  std::vector<long long> out;
  for (const BigInt& v : s.values()) out.push_back(v.convert_to<long long>());
  return out;
}

}  // namespace

TEST_CASE("canonical chart values") {
  CHECK(canonical_fraction(rat(610, 987)) == rat(-377, 987));
  CHECK(canonical_fraction(rat(1, 2)) == rat(-1, 2));
  CHECK(canonical_fraction(rat(-1, 2)) == rat(-1, 2));
  CHECK(canonical_fraction(rat(3, 2)) == rat(-1, 2));
  CHECK(canonical_fraction(rat(7, 4)) == rat(-1, 4));
  CHECK(canonical_fraction(Rational(0)) == 0);
  CHECK(canonical_fraction(Rational(5)) == 0);
}

TEST_CASE("angles add on the circle") {
  CHECK(Angle(rat(1, 2)) + Angle(rat(1, 2)) == Angle(Rational(0)));
  CHECK(-Angle(rat(1, 2)) == Angle(rat(1, 2)));
  CHECK(-Angle(rat(1, 4)) == Angle(rat(-1, 4)));
  CHECK(Angle(rat(3, 8)) + Angle(rat(1, 4)) == Angle(rat(-3, 8)));
}

TEST_CASE("intervals wrap onto the circle exactly") {
  ArcSet a = ArcSet::interval(Rational(0), rat(1, 8));
  CHECK(a.arcs().size() == 1);
  CHECK(a.measure() == rat(1, 8));
  CHECK(a.contains(rat(1, 16)));
  CHECK_FALSE(a.contains(Rational(0)));
  CHECK_FALSE(a.contains(rat(1, 8)));

  // An interval across the seam lands as two chart arcs.
  ArcSet w = ArcSet::interval(rat(3, 8), rat(5, 8), true, true);
  CHECK(w.arcs().size() == 2);
  CHECK(w.measure() == rat(1, 4));
  CHECK(w.contains(rat(7, 16)));
  CHECK(w.contains(rat(-7, 16)));  // 9/16 wraps to -7/16
  CHECK(w.contains(rat(-1, 2)));   // 1/2 is owned by the seam at -1/2
  CHECK_FALSE(w.contains(Rational(0)));

  // Length one covers the circle; open ends leave one point out.
  CHECK(ArcSet::interval(Rational(0), Rational(1), true, false).is_full_circle());
  ArcSet punctured = ArcSet::interval(Rational(0), Rational(1));
  CHECK_FALSE(punctured.is_full_circle());
  CHECK(punctured.measure() == 1);
  CHECK(punctured.contains(rat(1, 8)));
  CHECK_FALSE(punctured.contains(Rational(0)));

  // Degenerate intervals: a closed point or nothing.
  ArcSet point = ArcSet::interval(rat(1, 4), rat(1, 4), true, true);
  CHECK(point.contains(rat(1, 4)));
  CHECK(point.measure() == 0);
  CHECK_FALSE(point.has_interior());
  CHECK(ArcSet::interval(rat(1, 4), rat(1, 4)).is_empty());

  CHECK_THROWS_AS(ArcSet::interval(rat(1, 2), rat(1, 4)), std::invalid_argument);
  CHECK_THROWS_AS(ArcSet::interval(Rational(0), rat(9, 8)), std::invalid_argument);
}

TEST_CASE("the full circle is canonical") {
  ArcSet f = ArcSet::full_circle();
  CHECK(f.is_full_circle());
  CHECK(f.measure() == 1);
  CHECK(f.arcs().size() == 1);
  CHECK(f.arcs()[0] == Arc{rat(-1, 2), rat(1, 2), true, false});
  CHECK(f.contains(rat(-1, 2)));
  CHECK(f.contains(rat(499, 1000)));
  CHECK(ArcSet::empty().is_empty());
}

TEST_CASE("arc unions merge exactly at touching endpoints") {
  ArcSet joined = ArcSet::interval(Rational(0), rat(1, 8))
                      .unite(ArcSet::interval(rat(1, 8), rat(1, 4), true, false));
  CHECK(joined.arcs().size() == 1);
  CHECK(joined.measure() == rat(1, 4));
  CHECK(joined.contains(rat(1, 8)));

  ArcSet gap = ArcSet::interval(Rational(0), rat(1, 8))
                   .unite(ArcSet::interval(rat(1, 8), rat(1, 4)));
  CHECK(gap.arcs().size() == 2);
  CHECK_FALSE(gap.contains(rat(1, 8)));
  CHECK(gap.to_string() == "(0/1, 1/8) | (1/8, 1/4)");
}

TEST_CASE("set algebra identities on random arc sets") {
  std::mt19937 rng(41);
  auto random_set = [&rng]() {
    ArcSet s;
    for (int i = 0; i < 2; ++i) {
      long long a = static_cast<long long>(rng() % 33) - 16;
      long long len = 1 + static_cast<long long>(rng() % 8);
      s = s.unite(ArcSet::interval(rat(a, 32), rat(a + len, 32), rng() % 2 == 0,
                                   rng() % 2 == 0));
    }
    return s;
  };
  for (int trial = 0; trial < 40; ++trial) {
    ArcSet a = random_set(), b = random_set();
    ArcSet u = a.unite(b), n = a.intersect(b);
    CHECK(u.measure() + n.measure() == a.measure() + b.measure());
    CHECK(a.negate().negate() == a);
    Rational d = rat(static_cast<long long>(rng() % 64), 64);
    CHECK(a.rotate(d).rotate(-d) == a);
    CHECK(a.rotate(d).measure() == a.measure());
    for (long long k = -32; k < 32; ++k) {  // canonical chart points only
      Rational x = rat(k, 64);
      CHECK(u.contains(x) == (a.contains(x) || b.contains(x)));
      CHECK(n.contains(x) == (a.contains(x) && b.contains(x)));
      CHECK(a.negate().contains(x) == a.contains(canonical_fraction(-x)));
      CHECK(a.rotate(d).contains(x) == a.contains(canonical_fraction(x - d)));
    }
  }
}

TEST_CASE("rotation configuration is validated") {
  CHECK_NOTHROW(validate(RotationConfig{}));
  CHECK_THROWS_AS(validate({rat(610, 987), 0}), std::invalid_argument);
  CHECK_THROWS_AS(validate({rat(610, 987), 987}), std::invalid_argument);
  CHECK_THROWS_AS(validate({rat(1, 4), 4}), std::invalid_argument);
}

TEST_CASE("orbit points of the default rotation") {
  RotationConfig cfg;
  CHECK(orbit_point(0, cfg) == Angle(Rational(0)));
  CHECK(orbit_point(5, cfg) == Angle(rat(89, 987)));
  CHECK(orbit_point(8, cfg) == Angle(rat(-55, 987)));
  CHECK(orbit_point(-5, cfg) == Angle(rat(-89, 987)));
  CHECK_THROWS_AS(orbit_point(901, cfg), std::invalid_argument);
  CHECK_THROWS_AS(orbit_point(-901, cfg), std::invalid_argument);
}

TEST_CASE("hitting sets of the symmetric and anchored eighth arcs") {
  RotationConfig cfg{rat(610, 987), 13};
  CHECK(to_longs(hitting_set(Angle(Rational(0)), sym_eighth(), cfg)) ==
        std::vector<long long>{5, 8, 13});
  CHECK(to_longs(hitting_set(Angle(Rational(0)), half_eighth(), cfg)) ==
        std::vector<long long>{5, 13});
}

TEST_CASE("hitting sets agree with modular integer enumeration") {
  RotationConfig cfg;  // 610/987, horizon 900
  oracle::ChartArc sym{-1, 1, 8, false, false};
  CHECK(to_longs(hitting_set(Angle(Rational(0)), sym_eighth(), cfg)) ==
        oracle::hitting_times(610, 987, sym, 900));
  oracle::ChartArc half{0, 1, 8, true, false};
  CHECK(to_longs(hitting_set(Angle(Rational(0)), half_eighth(), cfg)) ==
        oracle::hitting_times(610, 987, half, 900));

  // A nonzero starting point shifts every orbit point before the test.
  IntSet shifted = hitting_set(Angle(rat(1, 987)), sym_eighth(), cfg);
  std::vector<long long> expect;
  for (long long n = 1; n <= 900; ++n) {
    long long c = oracle::chart_numerator(n, 610, 987);
    c = c + 1 > 987 / 2 ? c + 1 - 987 : c + 1;  // add 1/987, refold
    if (8 * c > -987 && 8 * c < 987) expect.push_back(n);
  }
  CHECK(to_longs(shifted) == expect);
}

TEST_CASE("hitting sets fall back to exact rationals for huge denominators") {
  BigInt q = (BigInt(1) << 61) + 1;
  RotationConfig cfg{Rational(1, q), 10};
  IntSet h = hitting_set(Angle(Rational(0)), sym_eighth(), cfg);
  CHECK(h == IntSet::closed_range(1, 10));
}

TEST_CASE("doubled signed sums") {
  CHECK(doubled_signed_sums(IntSet(std::vector<BigInt>{3})).values() ==
        std::vector<BigInt>{-6, -3, 0, 3, 6});
  std::set<long long> want = oracle::doubled_signed_sums({1, 10});
  std::vector<BigInt> wantv(want.begin(), want.end());
  CHECK(doubled_signed_sums(IntSet(std::vector<BigInt>{1, 10})).values() == wantv);
  CHECK_THROWS_AS(doubled_signed_sums(IntSet::closed_range(1, 13)), BudgetExceeded);
}

TEST_CASE("hitting differences: small window stays inconclusive") {
  HittingDifferenceReport r =
      check_hitting_differences(sym_eighth(), sym_eighth(), {rat(610, 987), 200});
  CHECK(r.verdict == Verdict::inconclusive);
  CHECK(r.checked_bound == 100);
  CHECK(r.hits_u.size() == 50);
  CHECK(r.hits_v.size() == 50);
  CHECK(r.differences.size() == 94);
  CHECK(r.shift_hits.size() == 100);
  CHECK(r.missing.empty());
  CHECK(r.unrealized == std::vector<BigInt>{36});
}

TEST_CASE("hitting differences: full-circle targets close the loop") {
  HittingDifferenceReport r = check_hitting_differences(
      ArcSet::full_circle(), ArcSet::full_circle(), {rat(610, 987), 200});
  CHECK(r.verdict == Verdict::pass);
  CHECK(r.missing.empty());
  CHECK(r.unrealized.empty());

  ArcSet points = ArcSet::interval(rat(1, 4), rat(1, 4), true, true);
  CHECK_THROWS_AS(check_hitting_differences(points, points, RotationConfig{}),
                  std::invalid_argument);
}

TEST_CASE("recurrent generator sets grow greedily") {
  ArcSet u = sym_eighth();
  RecurrentSip r1 = build_recurrent_sip(u, 1, {});
  CHECK(r1.generators.values() == std::vector<BigInt>{8});
  CHECK(r1.closure_positive.values() == std::vector<BigInt>{8, 16});

  RecurrentSip r3 = build_recurrent_sip(u, 3, {});
  CHECK(r3.generators.values() == std::vector<BigInt>{8, 89, 377});
  CHECK(r3.closure_positive.size() == 62);
  // Every certified closure point really returns to the target (closure
  // values may exceed the scan horizon, so fold s * alpha directly).
  for (const BigInt& s : r3.closure_positive.values())
    CHECK(u.contains(canonical_fraction(Rational(s * 610, 987))));

  CHECK_THROWS_AS(build_recurrent_sip(u, 0, {}), std::invalid_argument);
  CHECK_THROWS_AS(build_recurrent_sip(half_eighth(), 2, {}), std::invalid_argument);
  CHECK_THROWS_AS(build_recurrent_sip(u, 12, {}), HorizonExhausted);
}

TEST_CASE("chain ends of the anchored eighth arc") {
  CHECK(std::string(to_string(ChainEnd::terminal_proven)) == "terminal-proven");
  CHECK(std::string(to_string(ChainEnd::terminal_no_extension)) ==
        "terminal-no-extension");
  CHECK(std::string(to_string(ChainEnd::exhausted_bound)) == "exhausted-bound");
  CHECK(std::string(to_string(ChainEnd::reached_max_depth)) == "reached-max-depth");

  ArcSet uh = half_eighth();

  // A seed whose best sum already clears half the arc stops immediately.
  ChainReport r13 = extension_chain(uh, IntSet(std::vector<BigInt>{13}), 8, {});
  CHECK(r13.steps.size() == 1);
  CHECK(r13.steps[0].added == 0);
  CHECK(r13.steps[0].best_sum == rat(68, 987));
  CHECK(r13.steps[0].doubled);
  CHECK(r13.end == ChainEnd::terminal_proven);
  CHECK(r13.doubling_held);
  CHECK(r13.verdict == Verdict::pass);

  // A deeper seed accepts one doubling extension before the proof closes it.
  ChainReport r34 = extension_chain(uh, IntSet(std::vector<BigInt>{34}), 8, {});
  REQUIRE(r34.steps.size() == 2);
  CHECK(r34.steps[0].best_sum == rat(26, 987));
  CHECK(r34.steps[1].added == 102);
  CHECK(r34.steps[1].best_sum == rat(104, 987));
  CHECK(r34.steps[1].set.contains(34));
  CHECK(r34.steps[1].set.contains(102));
  CHECK(r34.end == ChainEnd::terminal_proven);
  CHECK(r34.verdict == Verdict::pass);
}

TEST_CASE("chains can be forced to scan a full period") {
  ChainReport r = extension_chain(half_eighth(), IntSet(std::vector<BigInt>{13}), 8,
                                  {}, {100'000, false});
  CHECK(r.steps.size() == 1);
  CHECK(r.end == ChainEnd::terminal_no_extension);
  CHECK(r.verdict == Verdict::pass);

  // A bound below the period leaves the question open.
  ChainReport s = extension_chain(half_eighth(), IntSet(std::vector<BigInt>{13}), 8,
                                  {}, {10, false});
  CHECK(s.end == ChainEnd::exhausted_bound);
  CHECK(s.verdict == Verdict::inconclusive);
}

TEST_CASE("chain depth caps and seed validation") {
  ChainReport capped =
      extension_chain(half_eighth(), IntSet(std::vector<BigInt>{34}), 1, {});
  CHECK(capped.steps.size() == 1);
  CHECK(capped.end == ChainEnd::reached_max_depth);
  CHECK(capped.verdict == Verdict::pass);

  // 1 * alpha lands far outside [0, 1/8).
  CHECK_THROWS_AS(
      extension_chain(half_eighth(), IntSet(std::vector<BigInt>{1}), 4, {}),
      std::invalid_argument);
  CHECK_THROWS_AS(extension_chain(half_eighth(), IntSet(), 4, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      extension_chain(half_eighth(), IntSet(std::vector<BigInt>{13}), 0, {}),
      std::invalid_argument);
  CHECK_THROWS_AS(extension_chain(ArcSet::empty(), IntSet(std::vector<BigInt>{13}),
                                  4, {}),
                  std::invalid_argument);
}
