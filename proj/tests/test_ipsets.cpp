#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "sipkit/expansion.hpp"
#include "sipkit/ipsets.hpp"

using namespace sipkit;

namespace {

IntSet from_longs(const std::set<long long>& s) {
  std::vector<BigInt> v(s.begin(), s.end());
  return IntSet(std::move(v));
}

std::vector<int> picks_to_ints(const IntSet& s) {
  std::vector<int> out;
  for (const BigInt& v : s.values()) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace

TEST_CASE("IntSet normalizes, orders and answers membership") {
  IntSet s(std::vector<BigInt>{3, 1, 3, -2});
  CHECK(s.size() == 3);
  CHECK(s.values() == std::vector<BigInt>{-2, 1, 3});
  CHECK(s.contains(1));
  CHECK_FALSE(s.contains(2));
  CHECK(s.min() == -2);
  CHECK(s.max() == 3);
  CHECK(s.to_string() == "{-2, 1, 3}");

  CHECK(IntSet(std::vector<BigInt>{1, 3}).is_subset_of(s));
  CHECK_FALSE(s.is_subset_of(IntSet(std::vector<BigInt>{1, 3})));

  IntSet r = IntSet::closed_range(-2, 2);
  CHECK(r.size() == 5);
  CHECK(r.contains(0));

  IntSet e;
  CHECK(e.empty());
  CHECK_THROWS_AS(e.min(), std::domain_error);
  CHECK_THROWS_AS(e.max(), std::domain_error);
}

TEST_CASE("symmetrize, positive part, difference set") {
  IntSet a(std::vector<BigInt>{1, 2});
  CHECK(symmetrize(a).values() == std::vector<BigInt>{-2, -1, 1, 2});
  CHECK(positive_part(IntSet(std::vector<BigInt>{-2, 0, 3})).values() ==
        std::vector<BigInt>{3});

  IntSet d = difference_set(IntSet(std::vector<BigInt>{1, 3, 7}));
  auto want = oracle::pairwise_differences({1, 3, 7});
  CHECK(d == from_longs(want));
  CHECK_THROWS_AS(difference_set(IntSet()), std::domain_error);
}

TEST_CASE("ip closure matches bitmask subset sums") {
  for (std::vector<long long> base :
       {std::vector<long long>{1, 2, 4}, {3, 9, 27}, {5}, {2, 3, 5, 7, 11}}) {
    std::vector<BigInt> v(base.begin(), base.end());
    CHECK(ip_closure(IntSet(std::move(v))) == from_longs(oracle::subset_sums(base)));
  }
  CHECK(ip_closure(IntSet()).values() == std::vector<BigInt>{0});
}

TEST_CASE("sip closure matches differences of subset sums") {
  for (std::vector<long long> base :
       {std::vector<long long>{3}, {1, 2}, {3, 9}, {2, 3, 10}}) {
    std::vector<BigInt> v(base.begin(), base.end());
    auto want = oracle::pairwise_differences(oracle::subset_sums(base));
    CHECK(sip_closure(IntSet(std::move(v))) == from_longs(want));
  }
  CHECK(sip_closure(IntSet(std::vector<BigInt>{3})).values() ==
        std::vector<BigInt>{-3, 0, 3});
}

TEST_CASE("closure size caps raise budget errors") {
  IntSet big = IntSet::closed_range(1, 23);
  CHECK_THROWS_AS(ip_closure(big), BudgetExceeded);
  ClosureOptions tight;
  tight.max_pairwise_base = 4;
  CHECK_THROWS_AS(sip_closure(IntSet(std::vector<BigInt>{1, 2, 3}), tight),
                  BudgetExceeded);
}

TEST_CASE("symmetric subset-sum identity holds on positive sets") {
  for (std::vector<long long> base :
       {std::vector<long long>{5}, {1, 2, 3}, {2, 7, 9}, {1, 10, 100}}) {
    std::vector<BigInt> v(base.begin(), base.end());
    SetIdentityCheck c = verify_symmetric_ip_identity(IntSet(std::move(v)));
    CHECK(c.holds);
    CHECK_FALSE(c.first_difference.has_value());
  }
  CHECK_THROWS_AS(verify_symmetric_ip_identity(IntSet()), std::invalid_argument);
  CHECK_THROWS_AS(verify_symmetric_ip_identity(IntSet(std::vector<BigInt>{-1, 2})),
                  std::invalid_argument);
}

TEST_CASE("colorings index the window one-based") {
  Coloring c = Coloring::modulo(10, 3);
  CHECK(c.window() == 10);
  CHECK(c.num_colors() == 3);
  CHECK(c.color(4) == 1);
  CHECK(c.color(9) == 0);
  CHECK_THROWS_AS(c.color(0), std::out_of_range);
  CHECK_THROWS_AS(c.color(11), std::out_of_range);

  Coloring z = Coloring::sign_changes_mod(50, 3);
  for (int t = 1; t <= 50; ++t) CHECK(z.color(t) == color_class(t, 3));

  CHECK_THROWS_AS(Coloring(3, std::vector<int>{0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Coloring(2, std::vector<int>{0, -1}), std::invalid_argument);
  CHECK_THROWS_AS(Coloring::modulo(5, 0), std::invalid_argument);
}

TEST_CASE("monochromatic difference search: frozen answers") {
  Coloring c = Coloring::sign_changes_mod(20, 3);
  auto r2 = search_mono_difference(c, 2);
  REQUIRE(r2.has_value());
  CHECK(r2->values() == std::vector<BigInt>{1, 2});
  auto r3 = search_mono_difference(c, 3);
  REQUIRE(r3.has_value());
  CHECK(r3->values() == std::vector<BigInt>{1, 2, 5});
  CHECK_THROWS_AS(search_mono_difference(c, 1), std::invalid_argument);
}

TEST_CASE("monochromatic subset-sum search: frozen answers") {
  Coloring c = Coloring::sign_changes_mod(20, 3);
  auto r3 = search_mono_ip(c, 3);
  REQUIRE(r3.has_value());
  CHECK(r3->values() == std::vector<BigInt>{1, 3, 9});
  // m(m+1)/2 must fit in the window.
  CHECK_THROWS_AS(search_mono_ip(Coloring::modulo(5, 2), 3), std::invalid_argument);
  CHECK_THROWS_AS(search_mono_ip(c, 1), std::invalid_argument);
}

TEST_CASE("window searches refuse to run past their budget") {
  Coloring c = Coloring::sign_changes_mod(30, 3);
  SearchOptions tiny{1};
  CHECK_THROWS_AS(search_mono_difference(c, 3, tiny), BudgetExceeded);
  try {
    search_mono_ip(c, 3, tiny);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.examined() >= 1);
  }
}

TEST_CASE("searches agree with the brute-force oracle on random colorings") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 12 + static_cast<int>(rng() % 18);
    int k = 2 + static_cast<int>(rng() % 3);
    std::vector<int> classes(n);
    for (int& c : classes) c = static_cast<int>(rng() % k);
    std::vector<int> one_based(n + 1, 0);
    for (int i = 0; i < n; ++i) one_based[i + 1] = classes[i];
    Coloring c(n, classes);
    for (int m = 2; m <= 3; ++m) {
      auto lib_d = search_mono_difference(c, m);
      auto ora_d = oracle::mono_difference(one_based, n, m);
      REQUIRE(lib_d.has_value() == ora_d.has_value());
      if (lib_d) CHECK(picks_to_ints(*lib_d) == *ora_d);
      auto lib_s = search_mono_ip(c, m);
      auto ora_s = oracle::mono_ip(one_based, n, m);
      REQUIRE(lib_s.has_value() == ora_s.has_value());
      if (lib_s) CHECK(picks_to_ints(*lib_s) == *ora_s);
    }
  }
}

TEST_CASE("translated subset-sum search finds the least translate first") {
  std::vector<BigInt> mult;
  for (int t = 3; t <= 60; t += 3) mult.push_back(t);
  auto r = search_translated_sip(IntSet(std::move(mult)), 2, {10, 60, false});
  REQUIRE(r.has_value());
  CHECK(r->t0 == 0);
  CHECK(r->generators.values() == std::vector<BigInt>{3, 6});

  CHECK_THROWS_AS(search_translated_sip(IntSet(), 0, {5, 10, false}),
                  std::invalid_argument);
}

TEST_CASE("translated search in the zero-residue class of a window") {
  std::vector<BigInt> a0;
  for (int t = 1; t <= 100; ++t)
    if (color_class(t, 3) == 0) a0.push_back(t);
  auto r = search_translated_sip(IntSet(std::move(a0)), 2, {5, 100, false});
  REQUIRE(r.has_value());
  CHECK(r->t0 == 0);
  CHECK(r->generators.values() == std::vector<BigInt>{3, 59});
}

TEST_CASE("shape-restricted translated search") {
  // Positive control: the exact value set of a two-block witness is found,
  // shape restrictions included.
  std::vector<BigInt> control{2, 11, 74, 83, 92};
  auto r = search_translated_sip(IntSet(std::move(control)), 2, {5, 100, true});
  REQUIRE(r.has_value());
  CHECK(r->t0 == 2);
  CHECK(r->generators.values() == std::vector<BigInt>{9, 81});

  // Negative control: the zero-residue class of [1..243] admits no shaped
  // witness pair at all.
  std::vector<BigInt> a0;
  for (int t = 1; t <= 243; ++t)
    if (color_class(t, 3) == 0) a0.push_back(t);
  CHECK_FALSE(
      search_translated_sip(IntSet(std::move(a0)), 2, {30, 243, true}).has_value());
}
