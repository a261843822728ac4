#include "sipkit/refine.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace sipkit {

struct PlusFn::State {
  std::vector<BigInt> cache;
  Producer produce;  // empty once the stream is over
  std::optional<std::uint64_t> pulls_left;
  bool over = false;
  bool by_budget = false;

  // Materializes one more value; false when the stream is over.
  bool pull_one() {
    if (over || !produce) {
      over = true;
      return false;
    }
    if (pulls_left && *pulls_left == 0) {
      over = true;
      by_budget = true;
      produce = nullptr;
      return false;
    }
    std::optional<BigInt> v = produce();
    if (!v) {
      over = true;
      produce = nullptr;
      return false;
    }
    if (pulls_left) --*pulls_left;
    if (*v < 1 || (!cache.empty() && *v <= cache.back()))
      throw std::invalid_argument(
          "PlusFn: producer must yield strictly increasing positive values");
    cache.push_back(std::move(*v));
    return true;
  }
};

namespace {

void check_increasing_positive(const std::vector<BigInt>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1 || (i > 0 && values[i] <= values[i - 1]))
      throw std::invalid_argument(
          "PlusFn: values must be strictly increasing and positive");
  }
}

}  // namespace

PlusFn::PlusFn() : state_(std::make_shared<State>()) {}

PlusFn::PlusFn(std::shared_ptr<State> state, int offset)
    : state_(std::move(state)), offset_(offset) {}

PlusFn PlusFn::from_values(std::vector<BigInt> values) {
  return from_values(std::move(values), nullptr);
}

PlusFn PlusFn::from_values(std::vector<BigInt> values, Producer extend) {
  check_increasing_positive(values);
  auto state = std::make_shared<State>();
  state->cache = std::move(values);
  state->produce = std::move(extend);
  return PlusFn(std::move(state), 0);
}

PlusFn PlusFn::from_producer(Producer produce) {
  return from_values({}, std::move(produce));
}

PlusFn PlusFn::powers_of_three(int first_exponent) {
  return scaled_powers_of_three(1, first_exponent, 1);
}

PlusFn PlusFn::scaled_powers_of_three(const BigInt& scale, int first_exponent,
                                      int exponent_step) {
  if (scale < 1 || first_exponent < 0 || exponent_step < 1)
    throw std::invalid_argument("PlusFn::scaled_powers_of_three: bad shape");
  return from_producer(
      [scale, e = first_exponent, exponent_step]() mutable -> std::optional<BigInt> {
        BigInt v = scale * pow3(e);
        e += exponent_step;
        return v;
      });
}

PlusFn PlusFn::arithmetic(const BigInt& start, const BigInt& step) {
  if (start < 1 || step < 1)
    throw std::invalid_argument("PlusFn::arithmetic: start and step must be positive");
  return from_producer([v = start, step]() mutable -> std::optional<BigInt> {
    BigInt r = v;
    v += step;
    return r;
  });
}

const BigInt& PlusFn::at(int n) const {
  if (n < 1) throw std::invalid_argument("PlusFn::at: indices are 1-based");
  if (!extends_to(n))
    throw SourceExhausted("PlusFn: stream ended before requested index",
                          static_cast<std::size_t>(stored()),
                          state_->by_budget);
  return state_->cache[static_cast<std::size_t>(offset_ + n - 1)];
}

bool PlusFn::extends_to(int n) const {
  if (n < 0) return false;
  while (state_->cache.size() < static_cast<std::size_t>(offset_) + n)
    if (!state_->pull_one()) return false;
  return true;
}

int PlusFn::stored() const {
  auto total = static_cast<int>(state_->cache.size());
  return total > offset_ ? total - offset_ : 0;
}

std::vector<BigInt> PlusFn::prefix(int n) const {
  std::vector<BigInt> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) out.push_back(at(i));
  return out;
}

std::vector<BigInt> PlusFn::stored_values() const {
  const auto& c = state_->cache;
  if (c.size() <= static_cast<std::size_t>(offset_)) return {};
  return std::vector<BigInt>(c.begin() + offset_, c.end());
}

bool PlusFn::ended() const { return state_->over || !state_->produce; }

bool PlusFn::ended_by_budget() const { return state_->by_budget; }

PlusFn PlusFn::drop_first(int d) const {
  if (d < 0) throw std::invalid_argument("PlusFn::drop_first: negative count");
  return PlusFn(state_, offset_ + d);
}

PlusFn PlusFn::with_pull_limit(std::uint64_t limit) const {
  auto state = std::make_shared<State>();
  state->pulls_left = limit;
  state->produce = [parent = *this, pos = 0]() mutable -> std::optional<BigInt> {
    if (!parent.extends_to(pos + 1)) return std::nullopt;
    return parent.at(++pos);
  };
  return PlusFn(std::move(state), 0);
}

bool is_refinement(const PlusFn& k2, const PlusFn& k1,
                   const ClosureOptions& opts) {
  IntSet lhs = ip_closure(IntSet(k2.stored_values()), opts);
  IntSet rhs = ip_closure(IntSet(k1.stored_values()), opts);
  return lhs.is_subset_of(rhs);
}

IntSet signed_sums(const std::vector<BigInt>& values) {
  std::vector<BigInt> sums = {BigInt(0)};
  for (const BigInt& v : values) {
    std::vector<BigInt> next;
    next.reserve(sums.size() * 3);
    for (const BigInt& s : sums) {
      next.push_back(s - v);
      next.push_back(s);
      next.push_back(s + v);
    }
    sums = std::move(next);
  }
  return IntSet(std::move(sums));
}

namespace {

// Level-N digit class: 0 when divisible by 3^N, else the sign of the digit
// at position N.  Validates the divisibility the step relies on.
int level_class(const BigInt& v, int n, const BigInt& mod_prev,
                const BigInt& mod_now) {
  if (n >= 2 && v % mod_prev != 0)
    throw std::domain_error(
        "refine_beyond: source value not divisible by 3^(N-1)");
  if (v % mod_now == 0) return 0;
  return mod_floor(v / mod_prev, 3) == 1 ? +1 : -1;
}

}  // namespace

RefineStep refine_beyond(const PlusFn& k, int N, const RefineOptions& opts) {
  if (N < 1) throw std::invalid_argument("refine_beyond: level must be >= 1");
  if (opts.request < 1)
    throw std::invalid_argument("refine_beyond: request must be >= 1");
  if (opts.scan_budget < 1)
    throw std::invalid_argument("refine_beyond: scan budget must be >= 1");

  const BigInt mod_prev = pow3(N - 1);
  const BigInt mod_now = pow3(N);
  const std::size_t request = static_cast<std::size_t>(opts.request);
  const std::uint64_t probe =
      opts.case1_probe == 0 ? opts.scan_budget
                            : std::min(opts.case1_probe, opts.scan_budget);

  std::vector<BigInt> hits;
  std::vector<BigInt> plus_vals, minus_vals;
  int last_hit_pos = 0, last_plus_pos = 0, last_minus_pos = 0;
  int pos = 0;

  auto scan_one = [&]() -> bool {
    if (!k.extends_to(pos + 1)) return false;
    const BigInt& v = k.at(pos + 1);
    ++pos;
    switch (level_class(v, N, mod_prev, mod_now)) {
      case 0:
        hits.push_back(v);
        last_hit_pos = pos;
        break;
      case +1:
        plus_vals.push_back(v);
        last_plus_pos = pos;
        break;
      default:
        minus_vals.push_back(v);
        last_minus_pos = pos;
        break;
    }
    return true;
  };

  // Wait for enough divisible values before falling back to triple sums.
  while (hits.size() < request && static_cast<std::uint64_t>(pos) < probe)
    if (!scan_one()) break;

  if (hits.size() >= request) {
    auto continuation = [parent = k, cursor = last_hit_pos, N, mod_prev,
                         mod_now]() mutable -> std::optional<BigInt> {
      while (parent.extends_to(cursor + 1)) {
        const BigInt& v = parent.at(++cursor);
        if (level_class(v, N, mod_prev, mod_now) == 0) return v;
      }
      return std::nullopt;
    };
    hits.resize(request);
    return {PlusFn::from_values(std::move(hits), std::move(continuation)),
            RefineCase::subsequence, N, 0};
  }

  // Committed to triple sums; pick the class with more evidence so far.
  const int delta = plus_vals.size() >= minus_vals.size() ? +1 : -1;
  auto& cls = delta > 0 ? plus_vals : minus_vals;
  int last_cls_pos = delta > 0 ? last_plus_pos : last_minus_pos;
  while (cls.size() < 3 * request &&
         static_cast<std::uint64_t>(pos) < opts.scan_budget) {
    if (!scan_one()) break;
    last_cls_pos = delta > 0 ? last_plus_pos : last_minus_pos;
  }
  if (cls.size() < 3 * request)
    throw SourceExhausted(
        "refine_beyond: ran out of source values for the requested length",
        cls.size() / 3,
        static_cast<std::uint64_t>(pos) >= opts.scan_budget ||
            k.ended_by_budget());

  std::vector<BigInt> sums;
  sums.reserve(request);
  for (std::size_t i = 0; i < request; ++i)
    sums.push_back(cls[3 * i] + cls[3 * i + 1] + cls[3 * i + 2]);

  auto continuation = [parent = k, cursor = last_cls_pos, N, mod_prev, mod_now,
                       delta]() mutable -> std::optional<BigInt> {
    BigInt sum = 0;
    int got = 0;
    while (got < 3) {
      if (!parent.extends_to(cursor + 1)) return std::nullopt;
      const BigInt& v = parent.at(++cursor);
      if (level_class(v, N, mod_prev, mod_now) == delta) {
        sum += v;
        ++got;
      }
    }
    return sum;
  };
  return {PlusFn::from_values(std::move(sums), std::move(continuation)),
          RefineCase::triple_sums, N, delta};
}

namespace {

// Empty result = certified; otherwise the reason the shape fails.
std::optional<std::string> certify_witness(const BigInt& t0,
                                           const std::vector<BigInt>& blocks) {
  if (t0 < 1) return "translate must be positive";
  if (blocks.empty()) return "at least one block required";
  if (!is_beyond(blocks.front(), t0))
    return "first block not beyond the translate";
  SignType type = sign_type(blocks.front());
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    if (!is_beyond(blocks[i], blocks[i - 1]))
      return "blocks must ascend beyond one another";
    if (sign_type(blocks[i]) != type) return "blocks must share one sign type";
  }
  // Translate identity: adding t0 keeps exactly the nonnegative signed sums
  // positive, checked on a bounded prefix.
  std::vector<BigInt> head(blocks.begin(),
                           blocks.begin() + std::min<std::size_t>(blocks.size(), 10));
  const IntSet sums = signed_sums(head);
  for (const BigInt& s : sums.values())
    if ((t0 + s > 0) != (s >= 0))
      return "translate identity fails at signed sum " + to_string(s);
  return std::nullopt;
}

}  // namespace

SipWitness SipWitness::from_parts(BigInt t0, std::vector<BigInt> blocks) {
  if (auto reason = certify_witness(t0, blocks))
    throw std::invalid_argument("SipWitness: " + *reason);
  SignType type = sign_type(blocks.front());
  return SipWitness{std::move(t0), std::move(blocks), type};
}

IntSet SipWitness::translated_sip_positive(int prefix) const {
  if (prefix < 1)
    throw std::invalid_argument("SipWitness: prefix must be >= 1");
  std::vector<BigInt> head(
      blocks.begin(),
      blocks.begin() + std::min<std::size_t>(blocks.size(),
                                             static_cast<std::size_t>(prefix)));
  std::vector<BigInt> out;
  const IntSet sums = signed_sums(head);
  for (const BigInt& s : sums.values())
    if (t0 + s > 0) out.push_back(t0 + s);
  return IntSet(std::move(out));
}

SipWitness build_sip_witness(const BigInt& u, const PlusFn& k0, int depth,
                             const WitnessOptions& opts) {
  if (depth < 1)
    throw std::invalid_argument("build_sip_witness: depth must be >= 1");

  // Minimal prefix sum pushing the translate positive.
  BigInt t0 = u;
  int used = 0;
  while (t0 <= 0) t0 += k0.at(++used);
  PlusFn stream = k0.drop_first(used);

  int level = 0;
  int next_level = std::max(max_index(t0) + 1, opts.min_first_level);
  std::vector<BigInt> positives, negatives;
  const std::vector<BigInt>* winner = nullptr;

  // By the 2*depth-1st candidate one type must have reached depth members.
  RefineOptions step{1, opts.scan_budget, opts.case1_probe};
  for (int round = 1; round <= 2 * depth - 1 && !winner; ++round) {
    for (int lvl = level + 1; lvl <= next_level; ++lvl)
      stream = refine_beyond(stream, lvl, step).refined;
    level = next_level;
    BigInt candidate = stream.at(1);
    stream = stream.drop_first(1);
    next_level = max_index(candidate) + 1;
    auto& bucket =
        sign_type(candidate) == SignType::positive ? positives : negatives;
    bucket.push_back(std::move(candidate));
    if (bucket.size() == static_cast<std::size_t>(depth)) winner = &bucket;
  }
  if (!winner)
    throw std::logic_error("build_sip_witness: no type reached depth");

  if (auto reason = certify_witness(t0, *winner))
    throw std::logic_error("build_sip_witness: certification failed: " +
                           *reason);
  return SipWitness{std::move(t0), *winner, sign_type(winner->front())};
}

ResidueCycle build_residue_cycle(const SipWitness& w, int K) {
  if (K < 3 || K % 2 == 0)
    throw std::invalid_argument("build_residue_cycle: K must be odd and >= 3");
  const int used = 2 * K + 1;
  if (w.blocks.size() < static_cast<std::size_t>(used))
    throw std::invalid_argument(
        "build_residue_cycle: witness needs at least 2K+1 blocks");

  ResidueCycle out;
  for (int i = 0; i < K; ++i) {
    BigInt s = w.t0;
    for (int n = 1; n <= used; ++n) {
      // The first 2i blocks alternate sign; the rest stay positive.
      const bool flipped = n <= 2 * i && n % 2 == 0;
      s += flipped ? -w.blocks[n - 1] : w.blocks[n - 1];
    }
    int zc = z_count(s);
    out.s.push_back(std::move(s));
    out.z.push_back(zc);
    out.residues.push_back(zc % K);
  }

  std::vector<bool> seen(static_cast<std::size_t>(K), false);
  for (int r : out.residues) seen[static_cast<std::size_t>(r)] = true;
  out.covers_all_residues =
      std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });

  const int want = w.block_type == SignType::positive ? 2 : -2;
  out.steps_match_type = true;
  for (int i = 1; i < K; ++i)
    if (out.z[i] - out.z[i - 1] != want) out.steps_match_type = false;
  return out;
}

}  // namespace sipkit
