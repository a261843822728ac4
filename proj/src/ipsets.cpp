#include "sipkit/ipsets.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "sipkit/expansion.hpp"

namespace sipkit {

namespace {

void sort_unique(std::vector<BigInt>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Advances a strictly increasing m-tuple over 1..n in lexicographic order.
bool next_combination(std::vector<std::int64_t>& idx, std::int64_t n) {
  const int m = static_cast<int>(idx.size());
  for (int i = m - 1; i >= 0; --i) {
    if (idx[i] < n - (m - 1 - i)) {
      ++idx[i];
      for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::int64_t> first_combination(int m) {
  std::vector<std::int64_t> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i + 1;
  return idx;
}

}  // namespace

IntSet::IntSet(std::vector<BigInt> elems) : elems_(std::move(elems)) {
  sort_unique(elems_);
}

IntSet IntSet::closed_range(const BigInt& lo, const BigInt& hi) {
  std::vector<BigInt> v;
  for (BigInt x = lo; x <= hi; ++x) v.push_back(x);
  return IntSet(std::move(v));
}

bool IntSet::contains(const BigInt& x) const {
  return std::binary_search(elems_.begin(), elems_.end(), x);
}

bool IntSet::is_subset_of(const IntSet& other) const {
  return std::includes(other.elems_.begin(), other.elems_.end(),
                       elems_.begin(), elems_.end());
}

const BigInt& IntSet::min() const {
  if (elems_.empty()) throw std::domain_error("min of empty set");
  return elems_.front();
}

const BigInt& IntSet::max() const {
  if (elems_.empty()) throw std::domain_error("max of empty set");
  return elems_.back();
}

std::string IntSet::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (i) out << ", ";
    out << elems_[i];
  }
  out << '}';
  return out.str();
}

IntSet symmetrize(const IntSet& a) {
  std::vector<BigInt> v = a.values();
  for (const BigInt& x : a.values()) v.push_back(-x);
  return IntSet(std::move(v));
}

IntSet positive_part(const IntSet& a) {
  std::vector<BigInt> v;
  for (const BigInt& x : a.values())
    if (x > 0) v.push_back(x);
  return IntSet(std::move(v));
}

IntSet difference_set(const IntSet& a) {
  if (a.empty()) throw std::domain_error("difference set of empty set");
  std::vector<BigInt> v;
  v.reserve(a.size() * a.size());
  for (const BigInt& x : a.values())
    for (const BigInt& y : a.values()) v.push_back(x - y);
  return IntSet(std::move(v));
}

IntSet ip_closure(const IntSet& a, const ClosureOptions& opts) {
  if (a.size() > opts.max_elements)
    throw BudgetExceeded("ip_closure: input set too large", a.size());
  std::vector<BigInt> sums = {BigInt(0)};
  for (const BigInt& x : a.values()) {
    std::vector<BigInt> shifted;
    shifted.reserve(sums.size());
    for (const BigInt& s : sums) shifted.push_back(s + x);
    std::vector<BigInt> merged;
    merged.reserve(sums.size() + shifted.size());
    std::merge(sums.begin(), sums.end(), shifted.begin(), shifted.end(),
               std::back_inserter(merged));
    sort_unique(merged);
    sums = std::move(merged);
  }
  return IntSet(std::move(sums));
}

IntSet sip_closure(const IntSet& a, const ClosureOptions& opts) {
  IntSet ip = ip_closure(a, opts);
  if (ip.size() > opts.max_pairwise_base)
    throw BudgetExceeded("sip_closure: subset-sum base too large", ip.size());
  return difference_set(ip);
}

SetIdentityCheck verify_symmetric_ip_identity(const IntSet& b,
                                              const ClosureOptions& opts) {
  if (b.empty())
    throw std::invalid_argument("verify_symmetric_ip_identity: empty set");
  if (b.min() <= 0)
    throw std::invalid_argument(
        "verify_symmetric_ip_identity: elements must be positive");
  IntSet lhs = sip_closure(b, opts);
  IntSet rhs = ip_closure(symmetrize(b), opts);
  if (lhs == rhs) return {true, std::nullopt};
  const auto& l = lhs.values();
  const auto& r = rhs.values();
  for (const BigInt& x : l)
    if (!rhs.contains(x)) return {false, x};
  for (const BigInt& x : r)
    if (!lhs.contains(x)) return {false, x};
  return {false, std::nullopt};  // unreachable
}

Coloring::Coloring(int n, std::vector<int> classes)
    : n_(n), classes_(std::move(classes)) {
  if (n < 1 || classes_.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("Coloring: class vector must cover 1..n");
  int top = 0;
  for (int c : classes_) {
    if (c < 0) throw std::invalid_argument("Coloring: negative color");
    top = std::max(top, c);
  }
  num_colors_ = top + 1;
}

Coloring Coloring::modulo(int n, int k) {
  if (k < 1) throw std::invalid_argument("Coloring::modulo: k must be >= 1");
  std::vector<int> classes(n);
  for (int i = 0; i < n; ++i) classes[i] = (i + 1) % k;
  return Coloring(n, std::move(classes));
}

Coloring Coloring::sign_changes_mod(int n, int k) {
  std::vector<int> classes(n);
  for (int i = 0; i < n; ++i)
    classes[i] = static_cast<int>(color_class(BigInt(i + 1), k));
  return Coloring(n, std::move(classes));
}

int Coloring::color(std::int64_t t) const {
  if (t < 1 || t > n_)
    throw std::out_of_range("Coloring::color: value outside window");
  return classes_[static_cast<std::size_t>(t - 1)];
}

std::optional<IntSet> search_mono_difference(const Coloring& c, int m,
                                             const SearchOptions& opts) {
  if (m < 2) throw std::invalid_argument("search_mono_difference: m < 2");
  const std::int64_t n = c.window();
  if (m > n) return std::nullopt;
  std::uint64_t examined = 0;
  auto idx = first_combination(m);
  do {
    if (++examined > opts.budget)
      throw BudgetExceeded("search_mono_difference", examined - 1);
    int color = -1;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      for (int j = i + 1; j < m && ok; ++j) {
        int d = c.color(idx[j] - idx[i]);
        if (color == -1)
          color = d;
        else if (d != color)
          ok = false;
      }
    if (ok) {
      std::vector<BigInt> v(idx.begin(), idx.end());
      return IntSet(std::move(v));
    }
  } while (next_combination(idx, n));
  return std::nullopt;
}

std::optional<IntSet> search_mono_ip(const Coloring& c, int m,
                                     const SearchOptions& opts) {
  if (m < 2) throw std::invalid_argument("search_mono_ip: m < 2");
  const std::int64_t n = c.window();
  if (static_cast<std::int64_t>(m) * (m + 1) / 2 > n)
    throw std::invalid_argument(
        "search_mono_ip: window too small to hold any candidate's sums");
  std::uint64_t examined = 0;
  auto idx = first_combination(m);
  do {
    if (++examined > opts.budget)
      throw BudgetExceeded("search_mono_ip", examined - 1);
    int color = -1;
    bool ok = true;
    for (std::uint32_t mask = 1; mask < (1u << m) && ok; ++mask) {
      std::int64_t sum = 0;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) sum += idx[i];
      if (sum > n) {
        ok = false;
        break;
      }
      int d = c.color(sum);
      if (color == -1)
        color = d;
      else if (d != color)
        ok = false;
    }
    if (ok) {
      std::vector<BigInt> v(idx.begin(), idx.end());
      return IntSet(std::move(v));
    }
  } while (next_combination(idx, n));
  return std::nullopt;
}

std::optional<TranslatedSip> search_translated_sip(
    const IntSet& s, int m, const TranslatedSipWindow& window,
    const SearchOptions& opts) {
  if (m < 1) throw std::invalid_argument("search_translated_sip: m < 1");
  if (window.elem_max < m) return std::nullopt;
  std::uint64_t examined = 0;
  for (std::int64_t t0 = 0; t0 <= window.t0_max; ++t0) {
    auto idx = first_combination(m);
    do {
      if (++examined > opts.budget)
        throw BudgetExceeded("search_translated_sip", examined - 1);
      if (window.witness_shape) {
        bool shaped = true;
        SignType type = sign_type(BigInt(idx[0]));
        if (t0 > 0 && !is_beyond(BigInt(idx[0]), BigInt(t0))) shaped = false;
        for (int i = 1; i < m && shaped; ++i) {
          if (!is_beyond(BigInt(idx[i]), BigInt(idx[i - 1]))) shaped = false;
          if (sign_type(BigInt(idx[i])) != type) shaped = false;
        }
        if (!shaped) continue;
      }
      std::vector<BigInt> gen(idx.begin(), idx.end());
      IntSet a{std::move(gen)};
      IntSet sip = sip_closure(a);
      bool ok = true;
      for (const BigInt& v : sip.values()) {
        BigInt w = t0 + v;
        if (w > 0 && !s.contains(w)) {
          ok = false;
          break;
        }
      }
      if (ok) return TranslatedSip{BigInt(t0), a};
    } while (next_combination(idx, window.elem_max));
  }
  return std::nullopt;
}

}  // namespace sipkit
