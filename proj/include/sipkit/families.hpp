#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sipkit/numeric.hpp"

namespace sipkit {

// Subsets of [1..u] as bitmasks: element i is bit i-1.
using Subset = std::uint32_t;

std::vector<int> subset_elements(Subset s);
std::string subset_to_string(Subset s);

// An upward-closed family of subsets of [1..u], stored as the antichain of
// its minimal members.  Family equality is antichain equality.
class FiniteFamily {
 public:
  // Normalizes arbitrary generators: keeps the minimal ones, sorted.
  // Throws std::domain_error when a generator leaves the universe and
  // std::invalid_argument for a universe outside [1, 20].
  FiniteFamily(int universe_size, std::vector<Subset> generators);

  static FiniteFamily empty(int universe_size);        // no members
  static FiniteFamily all_nonempty(int universe_size); // every nonempty set

  int universe() const { return universe_; }
  Subset universe_mask() const;
  const std::vector<Subset>& min_elements() const { return min_elements_; }

  bool member(Subset s) const;
  // Nonempty and without the empty set.
  bool proper() const;

  bool operator==(const FiniteFamily&) const = default;
  std::string to_string() const;

 private:
  int universe_;
  std::vector<Subset> min_elements_;
};

// Sets meeting every member: {B : B hits every A in F}.
FiniteFamily dual_family(const FiniteFamily& f);

// Upward closure of pairwise intersections of members.
FiniteFamily join_families(const FiniteFamily& f1, const FiniteFamily& f2);

// Sets belonging to both families.
FiniteFamily intersect_families(const FiniteFamily& f1, const FiniteFamily& f2);

struct FamilyClassification {
  bool proper;
  bool filter;          // proper and closed under intersection
  bool ramsey;          // proper and one side of every member split stays in
  bool dual_is_filter;  // the same property seen through the dual
};

// Exhaustive classification; the two right-hand fields agree for every
// family (checked independently here, asserted by tests).  Throws
// BudgetExceeded above the universe cap.
FamilyClassification classify_family(const FiniteFamily& f,
                                     int max_universe = 5);

// {A : A ∩ B ∈ F for every B ∈ F}; the largest filter-like core of F.
// Requires a proper family.
FiniteFamily sharp_core(const FiniteFamily& f);

struct ClauseCheck {
  bool applicable = true;  // false when the clause's hypothesis fails
  bool pass = true;
  std::optional<Subset> counterexample;
};

// Structure laws of the sharp core, each checked exhaustively:
//   filter_contained:   sharp_core(F) is a filter inside F ∩ dual(F)
//   dual_symmetric:     sharp_core(F) == sharp_core(dual(F))
//   filter_fixed:       for filters, sharp_core(F) == F, and the core is
//                       its own core
//   ramsey_gives_dual:  for ramsey families, sharp_core(F) == dual(F)
struct SharpCoreLaws {
  ClauseCheck filter_contained;
  ClauseCheck dual_symmetric;
  ClauseCheck filter_fixed;
  ClauseCheck ramsey_gives_dual;

  bool all_pass() const {
    return filter_contained.pass && dual_symmetric.pass && filter_fixed.pass &&
           ramsey_gives_dual.pass;
  }
};

SharpCoreLaws sharp_core_laws(const FiniteFamily& f, int max_universe = 5);

// Smallest family containing F that is stable under the window's truncated
// translations: every nonempty translate (A+n) ∩ [1..u], |n| <= u, of a
// minimal member is adjoined.
FiniteFamily gamma_window(const FiniteFamily& f);

// Largest such family inside F, defined through the dual:
// dual(gamma_window(dual(F))).
FiniteFamily tilde_gamma_window(const FiniteFamily& f);

}  // namespace sipkit
