#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sipkit/ipsets.hpp"
#include "sipkit/numeric.hpp"

namespace sipkit {

// Reduce a rational to the circle chart [-1/2, 1/2).
Rational canonical_fraction(const Rational& x);

// A point of the circle, stored as its canonical chart value.
class Angle {
 public:
  Angle() = default;
  explicit Angle(const Rational& x) : value_(canonical_fraction(x)) {}

  const Rational& value() const { return value_; }
  Angle operator+(const Angle& other) const { return Angle(value_ + other.value_); }
  Angle operator-() const { return Angle(-value_); }
  bool operator==(const Angle& other) const = default;

 private:
  Rational value_ = 0;
};

// One arc in chart coordinates: -1/2 <= lo <= hi <= 1/2 after normalization,
// with per-endpoint ownership flags.  The seam point belongs to -1/2 (an arc
// reaching 1/2 is always open there), and lo == hi is an isolated point with
// both flags set.
struct Arc {
  Rational lo;
  Rational hi;
  bool lo_closed = false;
  bool hi_closed = false;

  bool operator==(const Arc& other) const = default;
};

// A finite union of pairwise disjoint, non-mergeable arcs, kept sorted by
// left endpoint.  All membership tests and set operations are exact.
class ArcSet {
 public:
  ArcSet() = default;  // empty set

  static ArcSet empty();
  static ArcSet full_circle();
  // A single interval of the real line wrapped onto the circle.  Requires
  // lo <= hi and hi - lo <= 1; degenerate open intervals are empty, and a
  // length-1 interval is the full circle (minus the seam point when both
  // ends are open).
  static ArcSet interval(const Rational& lo, const Rational& hi,
                         bool lo_closed = false, bool hi_closed = false);
  // Arbitrary arcs in chart coordinates; overlaps are merged.
  static ArcSet from_arcs(std::vector<Arc> arcs);

  bool is_empty() const { return arcs_.empty(); }
  bool is_full_circle() const;
  // True when some arc has positive length.
  bool has_interior() const;
  bool contains(const Rational& chart_value) const;
  bool contains(const Angle& point) const { return contains(point.value()); }

  ArcSet unite(const ArcSet& other) const;
  ArcSet intersect(const ArcSet& other) const;
  // Pointwise negation x -> -x on the circle.
  ArcSet negate() const;
  // Pointwise shift x -> x + delta on the circle.
  ArcSet rotate(const Rational& delta) const;

  // Total length (a set of isolated points has measure zero).
  Rational measure() const;

  const std::vector<Arc>& arcs() const { return arcs_; }
  std::string to_string() const;
  bool operator==(const ArcSet& other) const;

 private:
  explicit ArcSet(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {}

  std::vector<Arc> arcs_;
};

// Parameters of the rational rotation x -> x + alpha with a scan window.
// The horizon must stay below the denominator of alpha so a windowed scan
// never silently wraps past a full period.
struct RotationConfig {
  Rational alpha = Rational(610, 987);
  std::int64_t horizon = 900;
};

// Throws std::invalid_argument unless 1 <= horizon < denominator(alpha).
void validate(const RotationConfig& cfg);

// The point n*alpha of the orbit of 0.  Requires |n| <= cfg.horizon.
Angle orbit_point(const BigInt& n, const RotationConfig& cfg);

// All n in [1, horizon] with x + n*alpha in u.
IntSet hitting_set(const Angle& x, const ArcSet& u, const RotationConfig& cfg);

// All sums over a of c_a * a with coefficients in {-2,-1,0,1,2}.  This is
// the symmetric span closed under element doubling; it always contains 0.
IntSet doubled_signed_sums(const IntSet& a, std::size_t max_elements = 12);

// Windowed test of "every hitting-set difference is itself a hitting time"
// for the pair (u, v): compares N(v) - N(u) against N(w) where w is the set
// of shifts delta with (u + delta) meeting v.  Differences are only trusted
// up to horizon/2; beyond that the window cannot decide.
struct HittingDifferenceReport {
  Verdict verdict = Verdict::inconclusive;
  IntSet hits_u;
  IntSet hits_v;
  IntSet differences;        // positive pairwise differences hits_v - hits_u
  IntSet shift_hits;         // n with (u + n*alpha) meeting v
  std::vector<BigInt> missing;     // differences <= checked_bound absent from shift_hits
  std::vector<BigInt> unrealized;  // shift hits <= checked_bound absent from differences
  std::int64_t checked_bound = 0;  // horizon / 2
};
HittingDifferenceReport check_hitting_differences(const ArcSet& u, const ArcSet& v,
                                                  const RotationConfig& cfg);

// Greedy certified extension: starting from the empty set, repeatedly adjoin
// the least positive m past the current closure such that every positive
// member s of the doubled signed-sum closure keeps s*alpha inside the
// symmetrized u.  Throws HorizonExhausted when no such m exists within the
// window.
struct RecurrentSip {
  IntSet generators;
  IntSet closure_positive;  // positive part of the certified closure
};
RecurrentSip build_recurrent_sip(const ArcSet& u, int depth, const RotationConfig& cfg);

// One accepted extension step of an extension chain.
struct ChainStep {
  BigInt added;          // 0 in the seed row
  IntSet set;            // generators after this step
  Rational best_sum;     // max chart value over the positive closure
  bool doubled;          // best_sum at least doubled from the previous row
};

enum class ChainEnd {
  terminal_proven,        // no extension can exist (shown without scanning)
  terminal_no_extension,  // scan covered a full rotation period: none exists
  exhausted_bound,        // scan bound hit without covering a full period
  reached_max_depth,      // chain still extendable when the step cap hit
};

const char* to_string(ChainEnd e);

struct ChainOptions {
  std::int64_t search_bound = 100'000;  // candidates scanned past the closure max
  // When the target is a single arc anchored at 0, a step with best_sum
  // already past half the arc length proves no extension exists without
  // scanning.  Turn this off to force the exhaustive scan instead.
  bool use_shortcut = true;
};

// Report of a greedy extension chain inside the half-arc u_half.
struct ChainReport {
  std::vector<ChainStep> steps;  // first row is the seed
  ChainEnd end = ChainEnd::exhausted_bound;
  bool doubling_held = true;     // every accepted step had doubled == true
  Verdict verdict = Verdict::inconclusive;
};
ChainReport extension_chain(const ArcSet& u_half, const IntSet& seed, int max_depth,
                            const RotationConfig& cfg, const ChainOptions& opts = {});

}  // namespace sipkit
