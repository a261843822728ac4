#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "sipkit/expansion.hpp"
#include "sipkit/ipsets.hpp"
#include "sipkit/numeric.hpp"

namespace sipkit {

// A strictly increasing sequence of positive integers, materialized on
// demand from a producer.  Copies share one underlying cache, so a value
// pulled through any copy becomes visible to all of them; drop_first
// returns a shifted view onto the same stream.
class PlusFn {
 public:
  using Producer = std::function<std::optional<BigInt>()>;

  PlusFn();  // empty, nothing to extend

  static PlusFn from_values(std::vector<BigInt> values);
  static PlusFn from_values(std::vector<BigInt> values, Producer extend);
  static PlusFn from_producer(Producer produce);
  static PlusFn powers_of_three(int first_exponent = 1);
  static PlusFn scaled_powers_of_three(const BigInt& scale,
                                       int first_exponent = 1,
                                       int exponent_step = 1);
  static PlusFn arithmetic(const BigInt& start, const BigInt& step);

  // k(n), 1-based; pulls from the producer as needed.  Throws
  // SourceExhausted when the stream ends (or hits a pull limit) first.
  const BigInt& at(int n) const;
  // True when at(1..n) can be served, pulling as needed.
  bool extends_to(int n) const;
  // Count of values materialized so far within this view.
  int stored() const;
  std::vector<BigInt> prefix(int n) const;    // at(1) .. at(n)
  std::vector<BigInt> stored_values() const;  // the materialized prefix
  // True once the stream is known to have no further values.
  bool ended() const;
  // True when the end was imposed by a pull limit, not by the producer.
  bool ended_by_budget() const;

  // View of the same stream without its first d values.
  PlusFn drop_first(int d) const;
  // A new stream reading this one, allowing at most `limit` further pulls.
  PlusFn with_pull_limit(std::uint64_t limit) const;

 private:
  struct State;
  PlusFn(std::shared_ptr<State> state, int offset);

  std::shared_ptr<State> state_;
  int offset_ = 0;
};

// Every subset sum of k2's stored prefix is a subset sum of k1's.
bool is_refinement(const PlusFn& k2, const PlusFn& k1,
                   const ClosureOptions& opts = {});

// All sums over coefficient vectors in {-1,0,+1}; for duplicate-free input
// this equals sip_closure of the set, computed without the quadratic pass.
IntSet signed_sums(const std::vector<BigInt>& values);

enum class RefineCase { subsequence, triple_sums };

struct RefineOptions {
  int request = 8;  // values materialized in the returned stream
  // Maximum source values consumed during this call.
  std::uint64_t scan_budget = 100'000;
  // Source values examined while waiting for divisible ones before
  // committing to triple sums; 0 means the whole scan budget.
  std::uint64_t case1_probe = 0;
};

struct RefineStep {
  PlusFn refined;  // `request` values materialized; extends on demand
  RefineCase used;
  int level;  // N
  int delta;  // sign class used for triple_sums (+1/-1), 0 otherwise
};

// One divisibility-raising step.  Input values must be divisible by
// 3^(N-1); output values are divisible by 3^N, formed either from the
// divisible subsequence or from triple sums within one sign class of the
// level-N digit.  The returned stream keeps applying the committed rule.
RefineStep refine_beyond(const PlusFn& k, int N, const RefineOptions& opts = {});

// A positive translate plus blocks that ascend beyond one another, all of
// one sign type.  Shape and the translate identity are certified on
// construction.
struct SipWitness {
  BigInt t0;
  std::vector<BigInt> blocks;
  SignType block_type;

  // Validates the shape; throws std::invalid_argument when it fails.
  static SipWitness from_parts(BigInt t0, std::vector<BigInt> blocks);

  // (t0 + signed sums of the first `prefix` blocks), positive part.
  IntSet translated_sip_positive(int prefix = 10) const;
};

struct WitnessOptions {
  // Raise to force the first block's divisibility level; the default
  // places it just beyond the translate's top digit.
  int min_first_level = 0;
  std::uint64_t scan_budget = 100'000;  // per refinement step
  std::uint64_t case1_probe = 243;      // per-step lookahead
};

// Pushes u positive with a minimal prefix sum of k0, then grows blocks by
// repeated refinement, each new block beyond the previous one, keeping the
// first sign type that reaches `depth` members.
SipWitness build_sip_witness(const BigInt& u, const PlusFn& k0, int depth,
                             const WitnessOptions& opts = {});

struct ResidueCycle {
  std::vector<BigInt> s;      // s_0 .. s_{K-1}
  std::vector<int> z;         // sign-change counts z(s_i)
  std::vector<int> residues;  // z(s_i) mod K
  bool covers_all_residues;
  // z moves by exactly +2 per step for positive-type blocks, -2 for
  // negative-type ones.
  bool steps_match_type;
};

// From the first 2K+1 blocks: s_0 takes every block positively, and s_i
// alternates the signs of the first 2i blocks.  Requires odd K >= 3 and a
// witness with at least 2K+1 blocks.
ResidueCycle build_residue_cycle(const SipWitness& w, int K);

}  // namespace sipkit
