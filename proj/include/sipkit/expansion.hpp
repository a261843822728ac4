#pragma once

#include <vector>

#include "sipkit/numeric.hpp"

namespace sipkit {

// Balanced base-b positional expansion, b = 2e+1 odd.  Every integer t has a
// unique finite expansion t = sum of eps_n * b^(n-1) with |eps_n| <= e.  Only
// the nonzero digits are stored, in increasing position order (positions are
// 1-based).
struct BalancedDigit {
  int position;  // n >= 1
  BigInt value;  // nonzero, |value| <= (base-1)/2
};

struct BalancedDigits {
  BigInt base;
  std::vector<BalancedDigit> digits;

  BigInt value() const;  // reconstructs t
};

// Throws std::invalid_argument unless b is odd and >= 3.
BalancedDigits expand_balanced(const BigInt& t, const BigInt& b);

// Base-3 reduced form: strictly increasing indices j_1 < ... < j_r with signs
// in {-1,+1}.  r == 0 exactly for t == 0.  For t > 0 the top sign is +1.
struct ReducedExpansion {
  std::vector<int> indices;
  std::vector<int> signs;

  int length() const { return static_cast<int>(indices.size()); }
  BigInt value() const;
};

ReducedExpansion reduced_expansion(const BigInt& t);

// Lowest/highest nonzero index of the base-3 expansion; 0 when t == 0.
int min_index(const BigInt& t);
int max_index(const BigInt& t);

enum class SignType { positive, negative };

// Positive iff the bottom and top signs agree; 0 counts as positive.
SignType sign_type(const BigInt& t);

const char* to_string(SignType t);

// True iff every index of t lies strictly above every index of s.
// Equivalently (when the top index of s is n+1): t is divisible by 3^(n+1).
// Throws std::domain_error if either argument is 0.
bool is_beyond(const BigInt& t, const BigInt& s);

// Number of adjacent sign changes in the reduced expansion.  Requires t >= 1.
int z_count(const BigInt& t);

// z_count mod k for odd k >= 3; throws std::invalid_argument otherwise.
int color_class(const BigInt& t, int k);

}  // namespace sipkit
