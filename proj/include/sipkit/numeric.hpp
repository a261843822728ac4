#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sipkit {

// All values are exact: integers are arbitrary precision, rationals are
// normalized fractions over them.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A search or closure ran past its configured work bound.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t examined)
      : std::runtime_error(what + " (examined " + std::to_string(examined) + ")"),
        examined_(examined) {}
  std::uint64_t examined() const { return examined_; }

 private:
  std::uint64_t examined_;
};

// A sequence producer ran dry (true end of data, or its extension budget).
class SourceExhausted : public std::runtime_error {
 public:
  SourceExhausted(const std::string& what, std::size_t produced, bool budget_limited)
      : std::runtime_error(what + " (produced " + std::to_string(produced) + ")"),
        produced_(produced),
        budget_limited_(budget_limited) {}
  std::size_t produced() const { return produced_; }
  bool budget_limited() const { return budget_limited_; }

 private:
  std::size_t produced_;
  bool budget_limited_;
};

// A windowed scan hit its iterate bound without a decision.
class HorizonExhausted : public std::runtime_error {
 public:
  HorizonExhausted(const std::string& what, std::int64_t horizon)
      : std::runtime_error(what + " (horizon " + std::to_string(horizon) + ")"),
        horizon_(horizon) {}
  std::int64_t horizon() const { return horizon_; }

 private:
  std::int64_t horizon_;
};

// Three-way outcome of a windowed or budgeted check.
enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

// Floor division/remainder for b > 0; the remainder is always in [0, b).
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline BigInt mod_floor(const BigInt& a, const BigInt& b) {
  BigInt r = a % b;
  if (r < 0) r += (b < 0 ? -b : b);
  return r;
}

inline BigInt pow3(int n) {
  BigInt r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

// Largest integer <= r.
inline BigInt floor_rational(const Rational& r) {
  return floor_div(boost::multiprecision::numerator(r),
                   boost::multiprecision::denominator(r));
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const Rational& v) {
  return boost::multiprecision::numerator(v).str() + "/" +
         boost::multiprecision::denominator(v).str();
}

}  // namespace sipkit
