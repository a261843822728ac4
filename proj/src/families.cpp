#include "sipkit/families.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace sipkit {

namespace {

constexpr int kMaxUniverse = 20;

std::vector<Subset> antichain_of(std::vector<Subset> gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<Subset> minimal;
  for (Subset g : gens) {
    bool dominated = false;
    for (Subset m : gens) {
      if (m != g && (m & g) == m) {
        dominated = true;
        break;
      }
    }
    if (!dominated) minimal.push_back(g);
  }
  return minimal;
}

// First member of exactly one of the two families, if any.
std::optional<Subset> first_difference(const FiniteFamily& a,
                                       const FiniteFamily& b) {
  for (Subset m : a.min_elements())
    if (!b.member(m)) return m;
  for (Subset m : b.min_elements())
    if (!a.member(m)) return m;
  return std::nullopt;
}

bool is_filter(const FiniteFamily& f) {
  if (!f.proper()) return false;
  const auto& mins = f.min_elements();
  for (std::size_t i = 0; i < mins.size(); ++i)
    for (std::size_t j = i; j < mins.size(); ++j)
      if (!f.member(mins[i] & mins[j])) return false;
  return true;
}

bool is_ramsey(const FiniteFamily& f) {
  if (!f.proper()) return false;
  const Subset all = f.universe_mask();
  for (Subset u = 0; u <= all; ++u) {
    if (!f.member(u)) continue;
    // Walk every sub-split of the member.
    for (Subset a = u; ; a = (a - 1) & u) {
      if (!f.member(a) && !f.member(u & ~a)) return false;
      if (a == 0) break;
    }
  }
  return true;
}

}  // namespace

std::vector<int> subset_elements(Subset s) {
  std::vector<int> out;
  for (int i = 0; s != 0; ++i, s >>= 1)
    if (s & 1u) out.push_back(i + 1);
  return out;
}

std::string subset_to_string(Subset s) {
  std::ostringstream o;
  o << '{';
  bool first = true;
  for (int e : subset_elements(s)) {
    if (!first) o << ',';
    o << e;
    first = false;
  }
  o << '}';
  return o.str();
}

FiniteFamily::FiniteFamily(int universe_size, std::vector<Subset> generators)
    : universe_(universe_size) {
  if (universe_size < 1 || universe_size > kMaxUniverse)
    throw std::invalid_argument("FiniteFamily: universe size out of range");
  const Subset mask = universe_mask();
  for (Subset g : generators)
    if ((g & ~mask) != 0)
      throw std::domain_error("FiniteFamily: generator outside the universe");
  min_elements_ = antichain_of(std::move(generators));
}

FiniteFamily FiniteFamily::empty(int universe_size) {
  return FiniteFamily(universe_size, {});
}

FiniteFamily FiniteFamily::all_nonempty(int universe_size) {
  std::vector<Subset> singletons;
  for (int i = 0; i < universe_size; ++i) singletons.push_back(1u << i);
  return FiniteFamily(universe_size, std::move(singletons));
}

Subset FiniteFamily::universe_mask() const {
  return (1u << universe_) - 1u;
}

bool FiniteFamily::member(Subset s) const {
  for (Subset m : min_elements_)
    if ((s & m) == m) return true;
  return false;
}

bool FiniteFamily::proper() const {
  return !min_elements_.empty() && min_elements_.front() != 0;
}

std::string FiniteFamily::to_string() const {
  std::ostringstream o;
  o << "up(";
  bool first = true;
  for (Subset m : min_elements_) {
    if (!first) o << ", ";
    o << subset_to_string(m);
    first = false;
  }
  o << ") on [1.." << universe_ << ']';
  return o.str();
}

FiniteFamily dual_family(const FiniteFamily& f) {
  const Subset all = f.universe_mask();
  auto meets_all = [&](Subset b) {
    for (Subset m : f.min_elements())
      if ((b & m) == 0) return false;
    return true;
  };
  std::vector<Subset> minimal;
  for (Subset b = 0; b <= all; ++b) {
    if (!meets_all(b)) continue;
    bool is_minimal = true;
    for (Subset rest = b; rest != 0 && is_minimal; rest &= rest - 1) {
      Subset bit = rest & (~rest + 1u);
      if (meets_all(b & ~bit)) is_minimal = false;
    }
    if (is_minimal) minimal.push_back(b);
  }
  return FiniteFamily(f.universe(), std::move(minimal));
}

FiniteFamily join_families(const FiniteFamily& f1, const FiniteFamily& f2) {
  if (f1.universe() != f2.universe())
    throw std::invalid_argument("join_families: universe mismatch");
  std::vector<Subset> gens;
  for (Subset a : f1.min_elements())
    for (Subset b : f2.min_elements()) gens.push_back(a & b);
  return FiniteFamily(f1.universe(), std::move(gens));
}

FiniteFamily intersect_families(const FiniteFamily& f1,
                                const FiniteFamily& f2) {
  if (f1.universe() != f2.universe())
    throw std::invalid_argument("intersect_families: universe mismatch");
  std::vector<Subset> gens;
  for (Subset a : f1.min_elements())
    for (Subset b : f2.min_elements()) gens.push_back(a | b);
  return FiniteFamily(f1.universe(), std::move(gens));
}

FamilyClassification classify_family(const FiniteFamily& f, int max_universe) {
  if (f.universe() > max_universe)
    throw BudgetExceeded("classify_family: universe above cap",
                         static_cast<std::uint64_t>(f.universe()));
  FamilyClassification r{};
  r.proper = f.proper();
  r.filter = is_filter(f);
  r.ramsey = is_ramsey(f);
  r.dual_is_filter = is_filter(dual_family(f));
  return r;
}

FiniteFamily sharp_core(const FiniteFamily& f) {
  if (!f.proper()) throw std::domain_error("sharp_core: family must be proper");
  const Subset all = f.universe_mask();
  // A qualifies when cutting it against any member stays inside; minimal
  // generators suffice as the members to cut against.
  auto keeps_all = [&](Subset a) {
    for (Subset m : f.min_elements())
      if (!f.member(a & m)) return false;
    return true;
  };
  std::vector<Subset> minimal;
  for (Subset a = 0; a <= all; ++a) {
    if (!keeps_all(a)) continue;
    bool is_minimal = true;
    for (Subset rest = a; rest != 0 && is_minimal; rest &= rest - 1) {
      Subset bit = rest & (~rest + 1u);
      if (keeps_all(a & ~bit)) is_minimal = false;
    }
    if (is_minimal) minimal.push_back(a);
  }
  return FiniteFamily(f.universe(), std::move(minimal));
}

SharpCoreLaws sharp_core_laws(const FiniteFamily& f, int max_universe) {
  if (!f.proper())
    throw std::domain_error("sharp_core_laws: family must be proper");
  if (f.universe() > max_universe)
    throw BudgetExceeded("sharp_core_laws: universe above cap",
                         static_cast<std::uint64_t>(f.universe()));

  const FiniteFamily core = sharp_core(f);
  const FiniteFamily dual = dual_family(f);
  SharpCoreLaws laws;

  laws.filter_contained.pass = is_filter(core);
  if (laws.filter_contained.pass) {
    for (Subset g : core.min_elements()) {
      if (!f.member(g) || !dual.member(g)) {
        laws.filter_contained.pass = false;
        laws.filter_contained.counterexample = g;
        break;
      }
    }
  }

  laws.dual_symmetric.pass = core == sharp_core(dual);
  if (!laws.dual_symmetric.pass)
    laws.dual_symmetric.counterexample = first_difference(core, sharp_core(dual));

  laws.filter_fixed.applicable = is_filter(f);
  if (laws.filter_fixed.applicable) {
    laws.filter_fixed.pass = core == f && sharp_core(core) == core;
    if (!laws.filter_fixed.pass)
      laws.filter_fixed.counterexample = first_difference(core, f);
  }

  laws.ramsey_gives_dual.applicable = is_ramsey(f);
  if (laws.ramsey_gives_dual.applicable) {
    laws.ramsey_gives_dual.pass = core == dual;
    if (!laws.ramsey_gives_dual.pass)
      laws.ramsey_gives_dual.counterexample = first_difference(core, dual);
  }
  return laws;
}

namespace {

// (M + n) ∩ [1..u] as a mask shift; n may be negative.
Subset shift_subset(Subset m, int n, Subset universe_mask) {
  if (n >= 0) return (m << n) & universe_mask;
  return m >> (-n);
}

}  // namespace

FiniteFamily gamma_window(const FiniteFamily& f) {
  const int w = f.universe();
  std::vector<Subset> gens;
  for (Subset m : f.min_elements())
    for (int n = -w; n <= w; ++n) {
      Subset t = shift_subset(m, n, f.universe_mask());
      if (t != 0) gens.push_back(t);
    }
  return FiniteFamily(w, std::move(gens));
}

FiniteFamily tilde_gamma_window(const FiniteFamily& f) {
  return dual_family(gamma_window(dual_family(f)));
}

}  // namespace sipkit
