#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sipkit/numeric.hpp"

namespace sipkit {

// Finite set of integers, kept sorted and duplicate-free.
class IntSet {
 public:
  IntSet() = default;
  explicit IntSet(std::vector<BigInt> elems);

  static IntSet closed_range(const BigInt& lo, const BigInt& hi);

  bool contains(const BigInt& x) const;
  bool is_subset_of(const IntSet& other) const;
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const std::vector<BigInt>& values() const { return elems_; }
  const BigInt& min() const;
  const BigInt& max() const;
  std::string to_string() const;

  bool operator==(const IntSet&) const = default;

 private:
  std::vector<BigInt> elems_;
};

// A union -A, positive part A intersect {1,2,...} (0 excluded).
IntSet symmetrize(const IntSet& a);
IntSet positive_part(const IntSet& a);

// All pairwise differences x - y.  Throws std::domain_error on an empty set.
IntSet difference_set(const IntSet& a);

struct ClosureOptions {
  // Subset-sum closures grow like 2^|A|; refuse inputs past this size.
  std::size_t max_elements = 22;
  // The difference of a closure is quadratic in its size; refuse past this.
  std::size_t max_pairwise_base = 1 << 13;
};

// All finite subset sums of A, including the empty sum 0.
IntSet ip_closure(const IntSet& a, const ClosureOptions& opts = {});

// difference_set(ip_closure(A)): every x - y with x, y subset sums of A.
IntSet sip_closure(const IntSet& a, const ClosureOptions& opts = {});

// Checks sip_closure(B) == ip_closure(symmetrize(B)) for nonempty B of
// positive integers, computing the two sides along their own routes.
struct SetIdentityCheck {
  bool holds;
  std::optional<BigInt> first_difference;  // element in exactly one side
};
SetIdentityCheck verify_symmetric_ip_identity(const IntSet& b,
                                              const ClosureOptions& opts = {});

// A coloring of the window [1..n] by colors 0..num_colors-1.
class Coloring {
 public:
  Coloring(int n, std::vector<int> classes);  // classes[i] colors i+1

  static Coloring modulo(int n, int k);          // t mod k
  static Coloring sign_changes_mod(int n, int k);  // color_class(t, k)

  int window() const { return n_; }
  int num_colors() const { return num_colors_; }
  int color(std::int64_t t) const;  // requires 1 <= t <= n

 private:
  int n_;
  int num_colors_;
  std::vector<int> classes_;
};

struct SearchOptions {
  std::uint64_t budget = 50'000'000;  // candidates examined before giving up
};

// Least m-subset L of [1..n] (lexicographic) whose positive difference set
// is monochromatic, if any exists in the window.
std::optional<IntSet> search_mono_difference(const Coloring& c, int m,
                                             const SearchOptions& opts = {});

// Least m-subset L of [1..n] whose positive subset sums all stay in the
// window and carry a single color.  Requires m(m+1)/2 <= n.
std::optional<IntSet> search_mono_ip(const Coloring& c, int m,
                                     const SearchOptions& opts = {});

struct TranslatedSipWindow {
  std::int64_t t0_max = 0;    // translations scanned: 0..t0_max
  std::int64_t elem_max = 0;  // generator elements scanned: 1..elem_max
  // When set, only generator tuples shaped like witness blocks are scanned:
  // first element beyond t0, each element beyond the previous, homogeneous
  // sign type.
  bool witness_shape = false;
};

struct TranslatedSip {
  BigInt t0;
  IntSet generators;
};

// First (t0, A) with |A| = m whose translated positive SIP values all lie in
// s.  The outer loop runs over t0, so smaller translations win ties.
std::optional<TranslatedSip> search_translated_sip(
    const IntSet& s, int m, const TranslatedSipWindow& window,
    const SearchOptions& opts = {});

}  // namespace sipkit
