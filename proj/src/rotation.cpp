#include "sipkit/rotation.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace sipkit {
namespace {

const Rational kHalf(1, 2);

BigInt rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
BigInt rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Sort, transfer the seam, drop degenerate open arcs, merge overlaps.
std::vector<Arc> normalize_arcs(std::vector<Arc> raw) {
  std::vector<Arc> cleaned;
  cleaned.reserve(raw.size() + 1);
  for (Arc& a : raw) {
    if (a.lo < -kHalf || a.hi > kHalf || a.lo > a.hi)
      throw std::invalid_argument("ArcSet: arc endpoints must satisfy -1/2 <= lo <= hi <= 1/2");
    if (a.lo == kHalf) {
      // The whole arc is the seam point; it lives at -1/2 when owned.
      if (a.lo_closed && a.hi_closed) cleaned.push_back({-kHalf, -kHalf, true, true});
      continue;
    }
    if (a.hi == kHalf) {
      if (a.hi_closed) cleaned.push_back({-kHalf, -kHalf, true, true});
      a.hi_closed = false;
    }
    if (a.lo == a.hi && !(a.lo_closed && a.hi_closed)) continue;
    cleaned.push_back(std::move(a));
  }
  std::sort(cleaned.begin(), cleaned.end(), [](const Arc& a, const Arc& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    if (a.lo_closed != b.lo_closed) return a.lo_closed;
    return a.hi > b.hi;
  });
  std::vector<Arc> merged;
  for (Arc& a : cleaned) {
    if (!merged.empty()) {
      Arc& c = merged.back();
      bool touches = a.lo < c.hi || (a.lo == c.hi && (a.lo_closed || c.hi_closed));
      if (touches) {
        if (a.hi > c.hi) {
          c.hi = a.hi;
          c.hi_closed = a.hi_closed;
        } else if (a.hi == c.hi) {
          c.hi_closed = c.hi_closed || a.hi_closed;
        }
        continue;
      }
    }
    merged.push_back(std::move(a));
  }
  return merged;
}

// Wrap the real interval [lo, hi] (length <= 1) onto the chart, appending
// one or two raw arcs.
void append_real_interval(std::vector<Arc>& out, const Rational& lo, const Rational& hi,
                          bool lo_closed, bool hi_closed) {
  if (hi - lo == 1) {
    if (lo_closed || hi_closed) {
      out.push_back({-kHalf, kHalf, true, false});
      return;
    }
    // Full circle minus the single point lo.
    Rational c = canonical_fraction(lo);
    if (c == -kHalf) {
      out.push_back({-kHalf, kHalf, false, false});
      return;
    }
    out.push_back({c, kHalf, false, false});
    out.push_back({-kHalf, c, true, false});
    return;
  }
  BigInt k = floor_rational(lo + kHalf);
  Rational lo2 = lo - k;
  Rational hi2 = hi - k;
  if (hi2 <= kHalf) {
    out.push_back({lo2, hi2, lo_closed, hi_closed});
    return;
  }
  out.push_back({lo2, kHalf, lo_closed, false});
  out.push_back({-kHalf, hi2 - 1, true, hi_closed});
}

// Integer membership spans for grid points chart = r/d with an int64 grid.
struct ResidueSpans {
  std::int64_t d = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> spans;  // inclusive chart ints

  bool contains(std::int64_t chart) const {
    for (const auto& [lo, hi] : spans)
      if (lo <= chart && chart <= hi) return true;
    return false;
  }
};

std::optional<ResidueSpans> residue_spans(const ArcSet& u, const BigInt& d) {
  if (d <= 0 || d >= (BigInt(1) << 61)) return std::nullopt;
  ResidueSpans rs;
  rs.d = d.convert_to<std::int64_t>();
  for (const Arc& a : u.arcs()) {
    Rational lo_t = a.lo * Rational(d);
    Rational hi_t = a.hi * Rational(d);
    BigInt lo_i = rat_den(lo_t) == 1 ? rat_num(lo_t) + (a.lo_closed ? 0 : 1)
                                     : floor_rational(lo_t) + 1;
    BigInt hi_i = rat_den(hi_t) == 1 ? rat_num(hi_t) - (a.hi_closed ? 0 : 1)
                                     : floor_rational(hi_t);
    if (lo_i <= hi_i)
      rs.spans.emplace_back(lo_i.convert_to<std::int64_t>(), hi_i.convert_to<std::int64_t>());
  }
  return rs;
}

// Chart value of n*alpha, exact, with no horizon restriction.
Rational chart_of_multiple(const BigInt& n, const Rational& alpha) {
  BigInt q = rat_den(alpha);
  BigInt r = mod_floor(n * rat_num(alpha), q);
  if (2 * r >= q) r -= q;
  return Rational(r, q);
}

std::vector<std::uint64_t> bit_mask(const IntSet& s, std::int64_t horizon) {
  std::vector<std::uint64_t> words(static_cast<std::size_t>(horizon >> 6) + 1, 0);
  for (const BigInt& v : s.values()) {
    std::int64_t n = v.convert_to<std::int64_t>();
    words[static_cast<std::size_t>(n >> 6)] |= std::uint64_t(1) << (n & 63);
  }
  return words;
}

// True when some a has bit a set in u and bit a+d set in v.
bool overlap_at_shift(const std::vector<std::uint64_t>& u, const std::vector<std::uint64_t>& v,
                      std::int64_t d) {
  const std::size_t word_shift = static_cast<std::size_t>(d >> 6);
  const int off = static_cast<int>(d & 63);
  for (std::size_t wi = 0; wi < u.size(); ++wi) {
    std::uint64_t uw = u[wi];
    if (!uw) continue;
    std::size_t vj = wi + word_shift;
    std::uint64_t vbits = 0;
    if (vj < v.size()) vbits = v[vj] >> off;
    if (off != 0 && vj + 1 < v.size()) vbits |= v[vj + 1] << (64 - off);
    if (uw & vbits) return true;
  }
  return false;
}

}  // namespace

Rational canonical_fraction(const Rational& x) {
  return x - Rational(floor_rational(x + kHalf));
}

ArcSet ArcSet::empty() { return ArcSet(); }

ArcSet ArcSet::full_circle() {
  return ArcSet(std::vector<Arc>{{-kHalf, kHalf, true, false}});
}

ArcSet ArcSet::interval(const Rational& lo, const Rational& hi, bool lo_closed, bool hi_closed) {
  if (lo > hi) throw std::invalid_argument("ArcSet::interval: lo > hi");
  if (hi - lo > 1) throw std::invalid_argument("ArcSet::interval: length exceeds the circle");
  std::vector<Arc> raw;
  append_real_interval(raw, lo, hi, lo_closed, hi_closed);
  return ArcSet(normalize_arcs(std::move(raw)));
}

ArcSet ArcSet::from_arcs(std::vector<Arc> arcs) {
  return ArcSet(normalize_arcs(std::move(arcs)));
}

bool ArcSet::is_full_circle() const {
  return arcs_.size() == 1 && arcs_[0].lo == -kHalf && arcs_[0].lo_closed &&
         arcs_[0].hi == kHalf && !arcs_[0].hi_closed;
}

bool ArcSet::has_interior() const {
  for (const Arc& a : arcs_)
    if (a.lo < a.hi) return true;
  return false;
}

bool ArcSet::contains(const Rational& chart_value) const {
  for (const Arc& a : arcs_) {
    if (chart_value < a.lo || chart_value > a.hi) continue;
    bool above = chart_value > a.lo || a.lo_closed;
    bool below = chart_value < a.hi || a.hi_closed;
    if (above && below) return true;
  }
  return false;
}

ArcSet ArcSet::unite(const ArcSet& other) const {
  std::vector<Arc> raw = arcs_;
  raw.insert(raw.end(), other.arcs_.begin(), other.arcs_.end());
  return ArcSet(normalize_arcs(std::move(raw)));
}

ArcSet ArcSet::intersect(const ArcSet& other) const {
  std::vector<Arc> raw;
  for (const Arc& a : arcs_) {
    for (const Arc& b : other.arcs_) {
      Arc c;
      if (a.lo > b.lo) {
        c.lo = a.lo;
        c.lo_closed = a.lo_closed;
      } else if (a.lo < b.lo) {
        c.lo = b.lo;
        c.lo_closed = b.lo_closed;
      } else {
        c.lo = a.lo;
        c.lo_closed = a.lo_closed && b.lo_closed;
      }
      if (a.hi < b.hi) {
        c.hi = a.hi;
        c.hi_closed = a.hi_closed;
      } else if (a.hi > b.hi) {
        c.hi = b.hi;
        c.hi_closed = b.hi_closed;
      } else {
        c.hi = a.hi;
        c.hi_closed = a.hi_closed && b.hi_closed;
      }
      if (c.lo < c.hi || (c.lo == c.hi && c.lo_closed && c.hi_closed)) raw.push_back(std::move(c));
    }
  }
  return ArcSet(normalize_arcs(std::move(raw)));
}

ArcSet ArcSet::negate() const {
  std::vector<Arc> raw;
  raw.reserve(arcs_.size());
  for (const Arc& a : arcs_) raw.push_back({-a.hi, -a.lo, a.hi_closed, a.lo_closed});
  return ArcSet(normalize_arcs(std::move(raw)));
}

ArcSet ArcSet::rotate(const Rational& delta) const {
  std::vector<Arc> raw;
  for (const Arc& a : arcs_)
    append_real_interval(raw, a.lo + delta, a.hi + delta, a.lo_closed, a.hi_closed);
  return ArcSet(normalize_arcs(std::move(raw)));
}

Rational ArcSet::measure() const {
  Rational total = 0;
  for (const Arc& a : arcs_) total += a.hi - a.lo;
  return total;
}

std::string ArcSet::to_string() const {
  if (arcs_.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const Arc& a = arcs_[i];
    if (i) out += " | ";
    out += a.lo_closed ? '[' : '(';
    out += sipkit::to_string(a.lo) + ", " + sipkit::to_string(a.hi);
    out += a.hi_closed ? ']' : ')';
  }
  return out;
}

bool ArcSet::operator==(const ArcSet& other) const { return arcs_ == other.arcs_; }

void validate(const RotationConfig& cfg) {
  if (cfg.horizon < 1)
    throw std::invalid_argument("RotationConfig: horizon must be at least 1");
  if (BigInt(cfg.horizon) >= rat_den(cfg.alpha))
    throw std::invalid_argument(
        "RotationConfig: horizon must stay below the denominator of alpha");
}

Angle orbit_point(const BigInt& n, const RotationConfig& cfg) {
  validate(cfg);
  if (n > cfg.horizon || n < -BigInt(cfg.horizon))
    throw std::invalid_argument("orbit_point: index outside the horizon window");
  return Angle(n * cfg.alpha);
}

IntSet hitting_set(const Angle& x, const ArcSet& u, const RotationConfig& cfg) {
  validate(cfg);
  std::vector<BigInt> hits;
  if (u.is_empty()) return IntSet(hits);
  const BigInt p = rat_num(cfg.alpha);
  const BigInt q = rat_den(cfg.alpha);
  const BigInt xb = rat_den(x.value());
  const BigInt d = q / boost::multiprecision::gcd(q, xb) * xb;
  if (auto spans = residue_spans(u, d)) {
    const std::int64_t dd = spans->d;
    std::int64_t step = mod_floor(p * (d / q), d).convert_to<std::int64_t>();
    std::int64_t r = mod_floor(rat_num(x.value()) * (d / xb), d).convert_to<std::int64_t>();
    for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
      r += step;
      if (r >= dd) r -= dd;
      std::int64_t chart = 2 * r >= dd ? r - dd : r;
      if (spans->contains(chart)) hits.push_back(n);
    }
  } else {
    Rational v = x.value();
    for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
      v = canonical_fraction(v + cfg.alpha);
      if (u.contains(v)) hits.push_back(n);
    }
  }
  return IntSet(hits);
}

IntSet doubled_signed_sums(const IntSet& a, std::size_t max_elements) {
  if (a.size() > max_elements)
    throw BudgetExceeded("doubled_signed_sums: too many generators", a.size());
  std::vector<BigInt> sums{BigInt(0)};
  for (const BigInt& v : a.values()) {
    std::vector<BigInt> next;
    next.reserve(sums.size() * 5);
    for (const BigInt& s : sums)
      for (int c = -2; c <= 2; ++c) next.push_back(s + c * v);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    sums = std::move(next);
  }
  return IntSet(std::move(sums));
}

HittingDifferenceReport check_hitting_differences(const ArcSet& u, const ArcSet& v,
                                                  const RotationConfig& cfg) {
  validate(cfg);
  if (!u.has_interior() || !v.has_interior())
    throw std::invalid_argument("check_hitting_differences: both sets need interior");

  // Shifts delta with (u + delta) meeting v: the union of pairwise
  // difference arcs, clamped to the full circle when a pair already wraps.
  ArcSet shifts = ArcSet::empty();
  for (const Arc& ua : u.arcs()) {
    for (const Arc& va : v.arcs()) {
      Rational lo = va.lo - ua.hi;
      Rational hi = va.hi - ua.lo;
      if (hi - lo > 1) {
        shifts = ArcSet::full_circle();
        break;
      }
      shifts = shifts.unite(ArcSet::interval(lo, hi, va.lo_closed && ua.hi_closed,
                                             va.hi_closed && ua.lo_closed));
    }
    if (shifts.is_full_circle()) break;
  }

  HittingDifferenceReport rep;
  rep.hits_u = hitting_set(Angle(), u, cfg);
  rep.hits_v = hitting_set(Angle(), v, cfg);
  rep.shift_hits = hitting_set(Angle(), shifts, cfg);
  rep.checked_bound = cfg.horizon / 2;

  const auto mask_u = bit_mask(rep.hits_u, cfg.horizon);
  const auto mask_v = bit_mask(rep.hits_v, cfg.horizon);
  std::vector<BigInt> diffs;
  for (std::int64_t d = 1; d < cfg.horizon; ++d)
    if (overlap_at_shift(mask_u, mask_v, d)) diffs.push_back(d);
  rep.differences = IntSet(std::move(diffs));

  for (const BigInt& d : rep.differences.values()) {
    if (d > rep.checked_bound) break;
    if (!rep.shift_hits.contains(d)) rep.missing.push_back(d);
  }
  for (const BigInt& n : rep.shift_hits.values()) {
    if (n > rep.checked_bound) break;
    if (!rep.differences.contains(n)) rep.unrealized.push_back(n);
  }
  rep.verdict = !rep.missing.empty()
                    ? Verdict::fail
                    : (!rep.unrealized.empty() ? Verdict::inconclusive : Verdict::pass);
  return rep;
}

RecurrentSip build_recurrent_sip(const ArcSet& u, int depth, const RotationConfig& cfg) {
  validate(cfg);
  if (depth < 1) throw std::invalid_argument("build_recurrent_sip: depth must be at least 1");
  const ArcSet sym = u.intersect(u.negate());
  if (!sym.has_interior())
    throw std::invalid_argument("build_recurrent_sip: symmetrized set has no interior");

  std::vector<BigInt> elems;
  IntSet closure({BigInt(0)});
  while (static_cast<int>(elems.size()) < depth) {
    // Candidates must keep every shifted copy of the closure inside sym.
    ArcSet pre = sym;
    for (const BigInt& n : closure.values())
      if (n != 0) pre = pre.intersect(sym.rotate(-(Rational(n) * cfg.alpha)));
    const BigInt start = closure.max() + 1;
    auto spans = residue_spans(pre, rat_den(cfg.alpha));
    bool found = false;
    for (BigInt m = start; m <= cfg.horizon; ++m) {
      if (spans) {
        BigInt r = mod_floor(m * rat_num(cfg.alpha), rat_den(cfg.alpha));
        std::int64_t rr = r.convert_to<std::int64_t>();
        std::int64_t chart = 2 * rr >= spans->d ? rr - spans->d : rr;
        if (!spans->contains(chart)) continue;
      } else if (!pre.contains(chart_of_multiple(m, cfg.alpha))) {
        continue;
      }
      std::vector<BigInt> trial = elems;
      trial.push_back(m);
      IntSet s2 = doubled_signed_sums(IntSet(trial));
      bool ok = true;
      for (const BigInt& s : s2.values()) {
        if (s <= 0) continue;
        if (!sym.contains(chart_of_multiple(s, cfg.alpha))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        elems = std::move(trial);
        closure = std::move(s2);
        found = true;
        break;
      }
    }
    if (!found)
      throw HorizonExhausted("build_recurrent_sip: no certified extension within horizon",
                             cfg.horizon);
  }
  return {IntSet(elems), positive_part(closure)};
}

const char* to_string(ChainEnd e) {
  switch (e) {
    case ChainEnd::terminal_proven:
      return "terminal-proven";
    case ChainEnd::terminal_no_extension:
      return "terminal-no-extension";
    case ChainEnd::exhausted_bound:
      return "exhausted-bound";
    default:
      return "reached-max-depth";
  }
}

ChainReport extension_chain(const ArcSet& u_half, const IntSet& seed, int max_depth,
                            const RotationConfig& cfg, const ChainOptions& opts) {
  validate(cfg);
  if (max_depth < 1) throw std::invalid_argument("extension_chain: max_depth must be at least 1");
  if (opts.search_bound < 1)
    throw std::invalid_argument("extension_chain: search_bound must be at least 1");
  if (u_half.is_empty()) throw std::invalid_argument("extension_chain: empty target set");
  if (seed.empty() || seed.min() <= 0)
    throw std::invalid_argument("extension_chain: seed must be nonempty and positive");

  const BigInt q = rat_den(cfg.alpha);
  auto best_chart = [&](const IntSet& closure) -> Rational {
    bool any = false;
    Rational best = 0;
    for (const BigInt& s : closure.values()) {
      if (s <= 0) continue;
      Rational c = chart_of_multiple(s, cfg.alpha);
      if (!any || c > best) best = c;
      any = true;
    }
    return best;
  };
  auto certified = [&](const IntSet& closure) -> const BigInt* {
    for (const BigInt& s : closure.values())
      if (s > 0 && !u_half.contains(chart_of_multiple(s, cfg.alpha))) return &s;
    return nullptr;
  };

  IntSet closure = doubled_signed_sums(seed);
  if (const BigInt* bad = certified(closure))
    throw std::invalid_argument("extension_chain: seed closure leaves the target at " +
                                sipkit::to_string(*bad));

  ChainReport rep;
  rep.steps.push_back({BigInt(0), seed, best_chart(closure), true});

  // Shape test for the short-cut: a single half-open arc anchored at 0.
  const bool anchored = u_half.arcs().size() == 1 && u_half.arcs()[0].lo == 0 &&
                        u_half.arcs()[0].lo_closed;
  const Rational beta = anchored ? u_half.arcs()[0].hi : Rational(0);
  const bool beta_closed = anchored && u_half.arcs()[0].hi_closed;

  auto spans = residue_spans(u_half, q);
  IntSet current = seed;
  while (true) {
    const Rational s = rep.steps.back().best_sum;
    if (opts.use_shortcut && anchored && (2 * s > beta || (2 * s == beta && !beta_closed))) {
      // Any extension t would put some closure member at chart value
      // frac(t*alpha) + s, which cannot stay below beta when frac(t*alpha)
      // itself must be at least s.
      rep.end = ChainEnd::terminal_proven;
      break;
    }
    if (static_cast<int>(rep.steps.size()) >= max_depth) {
      rep.end = ChainEnd::reached_max_depth;
      break;
    }
    const BigInt max_s = closure.max();
    bool accepted = false;
    for (BigInt t = max_s + 1; t <= max_s + opts.search_bound; ++t) {
      if (spans) {
        std::int64_t rr = mod_floor(t * rat_num(cfg.alpha), q).convert_to<std::int64_t>();
        std::int64_t chart = 2 * rr >= spans->d ? rr - spans->d : rr;
        if (!spans->contains(chart)) continue;
      } else if (!u_half.contains(chart_of_multiple(t, cfg.alpha))) {
        continue;
      }
      std::vector<BigInt> trial = current.values();
      trial.push_back(t);
      IntSet next_closure = doubled_signed_sums(IntSet(trial));
      if (certified(next_closure)) continue;
      Rational s_next = best_chart(next_closure);
      rep.steps.push_back({t, IntSet(trial), s_next, s_next >= 2 * s});
      current = IntSet(std::move(trial));
      closure = std::move(next_closure);
      accepted = true;
      break;
    }
    if (accepted) continue;
    // Certificates for t > 2*max_s depend on t only through t mod q, so a
    // scan reaching a full period past 2*max_s settles every larger t too.
    rep.end = BigInt(opts.search_bound) - max_s >= q ? ChainEnd::terminal_no_extension
                                                     : ChainEnd::exhausted_bound;
    break;
  }

  for (const ChainStep& st : rep.steps)
    if (!st.doubled) rep.doubling_held = false;
  rep.verdict = !rep.doubling_held
                    ? Verdict::fail
                    : (rep.end == ChainEnd::exhausted_bound ? Verdict::inconclusive
                                                            : Verdict::pass);
  return rep;
}

}  // namespace sipkit
