#include "sipkit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sipkit/expansion.hpp"
#include "sipkit/families.hpp"
#include "sipkit/ipsets.hpp"
#include "sipkit/refine.hpp"
#include "sipkit/rotation.hpp"

namespace sipkit::cli {
namespace {

// ---- JSON helpers: big integers as decimal strings, rationals as "p/q" ----

Json j_big(const BigInt& v) { return sipkit::to_string(v); }
Json j_rat(const Rational& r) { return sipkit::to_string(r); }

Json j_bigs(const std::vector<BigInt>& vs) {
  Json a = Json::array();
  for (const BigInt& v : vs) a.push_back(j_big(v));
  return a;
}

Json j_set(const IntSet& s) { return j_bigs(s.values()); }

Json j_subset(Subset s) {
  Json a = Json::array();
  for (int e : subset_elements(s)) a.push_back(e);
  return a;
}

Json j_family(const FiniteFamily& f) {
  Json mins = Json::array();
  for (Subset m : f.min_elements()) mins.push_back(j_subset(m));
  return Json{{"universe", f.universe()}, {"min_elements", mins}};
}

Json j_clause(const ClauseCheck& c) {
  Json j{{"applicable", c.applicable}, {"pass", c.pass}};
  j["counterexample"] = c.counterexample ? j_subset(*c.counterexample) : Json();
  return j;
}

// ---- input parsing ----

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      return parts;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

BigInt parse_big(const std::string& s) {
  try {
    return BigInt(trim(s));
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
}

Rational parse_rat(const std::string& s) {
  std::string t = trim(s);
  std::size_t slash = t.find('/');
  if (slash == std::string::npos) return Rational(parse_big(t));
  BigInt num = parse_big(t.substr(0, slash));
  BigInt den = parse_big(t.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  return Rational(num, den);
}

std::vector<BigInt> parse_big_list(const std::string& s) {
  std::vector<BigInt> out;
  if (trim(s).empty()) return out;
  for (const std::string& part : split(s, ',')) out.push_back(parse_big(part));
  return out;
}

std::vector<BigInt> parse_big_args(const std::vector<std::string>& args) {
  std::vector<BigInt> out;
  for (const std::string& a : args)
    for (const BigInt& v : parse_big_list(a)) out.push_back(v);
  return out;
}

int parse_small(const std::string& s, const char* what) {
  BigInt v = parse_big(s);
  if (v < -1000000 || v > 1000000)
    throw std::invalid_argument(std::string(what) + " out of range: '" + s + "'");
  return v.convert_to<int>();
}

// "lo,hi" is an open arc; "[lo,hi)" style brackets pick the closed ends.
ArcSet parse_arc(const std::string& spec) {
  std::string s = trim(spec);
  bool lo_closed = false;
  bool hi_closed = false;
  if (s.size() >= 2 && (s.front() == '[' || s.front() == '(') &&
      (s.back() == ']' || s.back() == ')')) {
    lo_closed = s.front() == '[';
    hi_closed = s.back() == ']';
    s = s.substr(1, s.size() - 2);
  }
  std::size_t comma = s.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("arc must look like 'lo,hi' or '[lo,hi)': '" + spec + "'");
  return ArcSet::interval(parse_rat(s.substr(0, comma)), parse_rat(s.substr(comma + 1)),
                          lo_closed, hi_closed);
}

ArcSet parse_arcs(const std::vector<std::string>& specs) {
  ArcSet u = ArcSet::empty();
  for (const std::string& s : specs) u = u.unite(parse_arc(s));
  return u;
}

// Family syntax: sets split on ';', elements on ',' — "1,2;3" is {{1,2},{3}}.
std::vector<Subset> parse_generators(const std::string& spec) {
  std::vector<Subset> gens;
  if (trim(spec).empty()) return gens;
  for (const std::string& part : split(spec, ';')) {
    Subset m = 0;
    if (!trim(part).empty()) {
      for (const std::string& elem : split(part, ',')) {
        int e = parse_small(elem, "family element");
        if (e < 1 || e > 20)
          throw std::invalid_argument("family element outside [1,20]: '" + elem + "'");
        m |= Subset(1) << (e - 1);
      }
    }
    gens.push_back(m);
  }
  return gens;
}

// Stream specs: "pow3", "pow3:first", "scaled:s,first,step",
// "arith:start,step", "range:lo,hi", or an explicit "v1,v2,v3" list.
PlusFn parse_stream(const std::string& spec) {
  std::string s = trim(spec);
  auto tail_of = [&](const char* prefix) {
    return s.substr(std::string(prefix).size());
  };
  if (s == "pow3") return PlusFn::powers_of_three();
  if (s.rfind("pow3:", 0) == 0)
    return PlusFn::powers_of_three(parse_small(tail_of("pow3:"), "exponent"));
  if (s.rfind("scaled:", 0) == 0) {
    std::vector<BigInt> a = parse_big_list(tail_of("scaled:"));
    if (a.size() != 3) throw std::invalid_argument("scaled:<scale>,<first>,<step>");
    return PlusFn::scaled_powers_of_three(a[0], a[1].convert_to<int>(),
                                          a[2].convert_to<int>());
  }
  if (s.rfind("arith:", 0) == 0) {
    std::vector<BigInt> a = parse_big_list(tail_of("arith:"));
    if (a.size() != 2) throw std::invalid_argument("arith:<start>,<step>");
    return PlusFn::arithmetic(a[0], a[1]);
  }
  if (s.rfind("range:", 0) == 0) {
    std::vector<BigInt> a = parse_big_list(tail_of("range:"));
    if (a.size() != 2 || a[0] > a[1] || a[1] - a[0] > 1000000)
      throw std::invalid_argument("range:<lo>,<hi> with hi - lo <= 1000000");
    std::vector<BigInt> vals;
    for (BigInt v = a[0]; v <= a[1]; ++v) vals.push_back(v);
    return PlusFn::from_values(std::move(vals));
  }
  return PlusFn::from_values(parse_big_list(s));
}

std::string canonical_list(const std::vector<BigInt>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ',';
    out += sipkit::to_string(vs[i]);
  }
  return out;
}

}  // namespace

Json RunReport::to_json() const {
  return Json{{"command", command},     {"params", params}, {"verdict", to_string(verdict)},
              {"witnesses", witnesses}, {"counts", counts}, {"elapsed_ms", elapsed_ms}};
}

std::string RunReport::to_csv() const {
  Json flat = to_json().flatten();
  auto escape = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      out += c;
      if (c == '"') out += '"';
    }
    out += '"';
    return out;
  };
  std::string header;
  std::string row;
  bool first = true;
  for (const auto& [key, val] : flat.items()) {
    if (!first) {
      header += ',';
      row += ',';
    }
    first = false;
    header += escape(key);
    row += escape(val.is_string() ? val.get<std::string>() : val.dump());
  }
  return header + "\n" + row + "\n";
}

CliResult execute(const std::vector<std::string>& args) {
  CliResult res;
  RunReport& rep = res.report;
  std::string format = "json";

  CLI::App app{"Exact combinatorics workbench: balanced-ternary colorings, subset-sum "
               "set algebra, finite family lattices, and rational rotation experiments."};
  app.name("sipkit");
  app.require_subcommand(1);
  app.fallthrough();  // global flags (--format) may follow the subcommand
  app.set_help_all_flag("--help-all", "Expand help for every subcommand");
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  auto timed = [&rep](auto body) {
    return [&rep, body]() {
      auto start = std::chrono::steady_clock::now();
      body();
      rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    };
  };

  // ---- expand ----
  struct {
    std::string t;
    std::string base = "3";
  } ex;
  auto* c_expand = app.add_subcommand("expand", "Balanced signed-digit expansion");
  c_expand->add_option("t", ex.t, "Integer to expand")->required();
  c_expand->add_option("--base", ex.base, "Odd base >= 3")->capture_default_str();
  c_expand->callback(timed([&] {
    BigInt t = parse_big(ex.t);
    BigInt b = parse_big(ex.base);
    rep.command = "expand";
    rep.params = {{"t", j_big(t)},
                  {"base", j_big(b)},
                  {"argv", Json::array({"expand", "--base=" + sipkit::to_string(b), "--",
                                        sipkit::to_string(t)})}};
    BalancedDigits d = expand_balanced(t, b);
    Json digits = Json::array();
    for (const BalancedDigit& dg : d.digits)
      digits.push_back(Json{{"position", dg.position}, {"value", j_big(dg.value)}});
    rep.witnesses = {{"digits", digits}, {"value", j_big(d.value())}};
    if (b == 3) {
      ReducedExpansion re = reduced_expansion(t);
      rep.witnesses["indices"] = re.indices;
      rep.witnesses["signs"] = re.signs;
      rep.witnesses["type"] = to_string(sign_type(t));
      if (t >= 1) rep.witnesses["z"] = z_count(t);
    }
    rep.counts = {{"digit_count", d.digits.size()}};
  }));

  // ---- zcount ----
  struct {
    std::string t;
  } zc;
  auto* c_zcount = app.add_subcommand("zcount", "Sign-change count of a positive integer");
  c_zcount->add_option("t", zc.t, "Positive integer")->required();
  c_zcount->callback(timed([&] {
    BigInt t = parse_big(zc.t);
    rep.command = "zcount";
    rep.params = {{"t", j_big(t)},
                  {"argv", Json::array({"zcount", "--", sipkit::to_string(t)})}};
    ReducedExpansion re = reduced_expansion(t);
    rep.witnesses = {{"z", z_count(t)}, {"indices", re.indices}, {"signs", re.signs}};
  }));

  // ---- color ----
  struct {
    std::string t;
    int k = 3;
  } co;
  auto* c_color = app.add_subcommand("color", "Sign-change color class z(t) mod K");
  c_color->add_option("t", co.t, "Positive integer")->required();
  c_color->add_option("--K", co.k, "Odd modulus >= 3")->capture_default_str();
  c_color->callback(timed([&] {
    BigInt t = parse_big(co.t);
    rep.command = "color";
    rep.params = {{"t", j_big(t)},
                  {"K", co.k},
                  {"argv", Json::array({"color", "--K=" + std::to_string(co.k), "--",
                                        sipkit::to_string(t)})}};
    int residue = color_class(t, co.k);
    rep.witnesses = {{"z", z_count(t)}, {"residue", residue}};
    if (co.k == 3) rep.witnesses["class"] = residue == 0 ? "A0" : "A1";
  }));

  // ---- sip ----
  auto* c_sip = app.add_subcommand("sip", "Subset-sum set algebra");
  c_sip->require_subcommand(1);
  struct {
    std::vector<std::string> elems;
    std::uint64_t cap = 22;
  } si;
  auto add_sip_leaf = [&](const char* name, const char* desc) {
    auto* c = c_sip->add_subcommand(name, desc);
    c->add_option("elements", si.elems, "Set elements")->required();
    c->add_option("--cap", si.cap, "Closure size cap")->capture_default_str();
    return c;
  };
  auto sip_common = [&](const char* name) {
    IntSet a(parse_big_args(si.elems));
    rep.command = std::string("sip ") + name;
    rep.params = {{"elements", j_set(a)},
                  {"cap", si.cap},
                  {"argv", Json::array({"sip", name, "--cap=" + std::to_string(si.cap),
                                        "--", canonical_list(a.values())})}};
    return a;
  };
  add_sip_leaf("closure", "Signed subset-sum closure D(IP(A))")->callback(timed([&] {
    IntSet a = sip_common("closure");
    IntSet out = sip_closure(a, {si.cap, ClosureOptions{}.max_pairwise_base});
    rep.witnesses = {{"closure", j_set(out)}};
    rep.counts = {{"size", out.size()}};
  }));
  add_sip_leaf("ip", "Subset-sum closure IP(A)")->callback(timed([&] {
    IntSet a = sip_common("ip");
    IntSet out = ip_closure(a, {si.cap, ClosureOptions{}.max_pairwise_base});
    rep.witnesses = {{"closure", j_set(out)}};
    rep.counts = {{"size", out.size()}};
  }));
  add_sip_leaf("diff", "Pairwise difference set D(A)")->callback(timed([&] {
    IntSet a = sip_common("diff");
    IntSet out = difference_set(a);
    rep.witnesses = {{"closure", j_set(out)}};
    rep.counts = {{"size", out.size()}};
  }));
  add_sip_leaf("lemma11", "Check D(IP(B)) == IP(B and -B) along two routes")
      ->callback(timed([&] {
        IntSet a = sip_common("lemma11");
        SetIdentityCheck chk =
            verify_symmetric_ip_identity(a, {si.cap, ClosureOptions{}.max_pairwise_base});
        rep.witnesses = {{"holds", chk.holds}};
        rep.witnesses["first_difference"] =
            chk.first_difference ? j_big(*chk.first_difference) : Json();
        rep.verdict = chk.holds ? Verdict::pass : Verdict::fail;
      }));

  // ---- search ----
  auto* c_search = app.add_subcommand("search", "Window searches over colorings");
  c_search->require_subcommand(1);
  struct {
    std::int64_t n = 0;
    int m = 2;
    int zmod = 0;
    int mod = 0;
    std::string colors;
    int cls = 0;
    std::string elements;
    std::int64_t t0_max = 0;
    std::int64_t elem_max = 0;
    bool shape = false;
    std::uint64_t budget = 50'000'000;
  } se;
  auto add_coloring_opts = [&](CLI::App* c, bool with_class) {
    c->add_option("--n", se.n, "Window [1..n]");
    c->add_option("--m", se.m, "Subset size")->capture_default_str();
    auto* oz = c->add_option("--zmod", se.zmod, "Color by sign-change count mod K");
    auto* om = c->add_option("--mod", se.mod, "Color by t mod K");
    auto* oc = c->add_option("--colors", se.colors, "Explicit colors for 1..n");
    oz->excludes(om)->excludes(oc);
    om->excludes(oc);
    if (with_class) c->add_option("--class", se.cls, "Target color")->capture_default_str();
    c->add_option("--budget", se.budget, "Search budget")->capture_default_str();
  };
  auto make_coloring = [&]() -> Coloring {
    if (!se.colors.empty()) {
      std::vector<int> cls;
      for (const BigInt& v : parse_big_list(se.colors)) cls.push_back(v.convert_to<int>());
      if (se.n == 0) se.n = static_cast<std::int64_t>(cls.size());
      if (se.n != static_cast<std::int64_t>(cls.size()))
        throw std::invalid_argument("--colors length must equal --n");
      return Coloring(static_cast<int>(se.n), std::move(cls));
    }
    if (se.n <= 0) throw std::invalid_argument("--n is required with --zmod/--mod");
    if (se.zmod > 0) return Coloring::sign_changes_mod(static_cast<int>(se.n), se.zmod);
    if (se.mod > 0) return Coloring::modulo(static_cast<int>(se.n), se.mod);
    throw std::invalid_argument("choose a coloring: --zmod, --mod, or --colors");
  };
  auto coloring_params = [&](Json& params, std::vector<std::string>& argv) {
    params["n"] = se.n;
    params["m"] = se.m;
    params["budget"] = se.budget;
    argv.push_back("--n=" + std::to_string(se.n));
    argv.push_back("--m=" + std::to_string(se.m));
    argv.push_back("--budget=" + std::to_string(se.budget));
    if (!se.colors.empty()) {
      params["colors"] = se.colors;
      argv.push_back("--colors=" + se.colors);
    } else if (se.zmod > 0) {
      params["zmod"] = se.zmod;
      argv.push_back("--zmod=" + std::to_string(se.zmod));
    } else if (se.mod > 0) {
      params["mod"] = se.mod;
      argv.push_back("--mod=" + std::to_string(se.mod));
    }
  };

  auto* c_monod = c_search->add_subcommand(
      "mono-d", "Least set whose positive differences are one color");
  add_coloring_opts(c_monod, false);
  c_monod->callback(timed([&] {
    Coloring c = make_coloring();
    rep.command = "search mono-d";
    std::vector<std::string> argv{"search", "mono-d"};
    coloring_params(rep.params, argv);
    rep.params["argv"] = argv;
    auto found = search_mono_difference(c, se.m, {se.budget});
    rep.witnesses = {{"found", found.has_value()}};
    rep.witnesses["set"] = found ? j_set(*found) : Json();
    rep.verdict = found ? Verdict::pass : Verdict::fail;
  }));

  auto* c_monoip = c_search->add_subcommand(
      "mono-ip", "Least set whose subset sums are one color");
  add_coloring_opts(c_monoip, false);
  c_monoip->callback(timed([&] {
    Coloring c = make_coloring();
    rep.command = "search mono-ip";
    std::vector<std::string> argv{"search", "mono-ip"};
    coloring_params(rep.params, argv);
    rep.params["argv"] = argv;
    auto found = search_mono_ip(c, se.m, {se.budget});
    rep.witnesses = {{"found", found.has_value()}};
    rep.witnesses["set"] = found ? j_set(*found) : Json();
    rep.verdict = found ? Verdict::pass : Verdict::fail;
  }));

  auto* c_tsip = c_search->add_subcommand(
      "tsip", "Translated signed-sum witness inside a target set");
  add_coloring_opts(c_tsip, true);
  c_tsip->add_option("--elements", se.elements, "Explicit target set (overrides coloring)");
  c_tsip->add_option("--t0-max", se.t0_max, "Largest translation scanned")
      ->capture_default_str();
  c_tsip->add_option("--elem-max", se.elem_max, "Largest generator scanned (default n)");
  c_tsip->add_flag("--shape", se.shape, "Only witness-shaped generator tuples");
  c_tsip->callback(timed([&] {
    rep.command = "search tsip";
    std::vector<std::string> argv{"search", "tsip"};
    IntSet target;
    if (!se.elements.empty()) {
      target = IntSet(parse_big_list(se.elements));
      rep.params["elements"] = se.elements;
      rep.params["m"] = se.m;
      rep.params["budget"] = se.budget;
      argv.push_back("--elements=" + se.elements);
      argv.push_back("--m=" + std::to_string(se.m));
      argv.push_back("--budget=" + std::to_string(se.budget));
    } else {
      Coloring c = make_coloring();
      coloring_params(rep.params, argv);
      rep.params["class"] = se.cls;
      argv.push_back("--class=" + std::to_string(se.cls));
      std::vector<BigInt> vals;
      for (std::int64_t t = 1; t <= se.n; ++t)
        if (c.color(t) == se.cls) vals.push_back(t);
      target = IntSet(std::move(vals));
    }
    std::int64_t elem_max = se.elem_max > 0 ? se.elem_max
                            : se.n > 0      ? se.n
                            : target.empty() ? 0
                                             : target.max().convert_to<std::int64_t>();
    rep.params["t0_max"] = se.t0_max;
    rep.params["elem_max"] = elem_max;
    rep.params["shape"] = se.shape;
    argv.push_back("--t0-max=" + std::to_string(se.t0_max));
    argv.push_back("--elem-max=" + std::to_string(elem_max));
    if (se.shape) argv.push_back("--shape");
    rep.params["argv"] = argv;
    auto found =
        search_translated_sip(target, se.m, {se.t0_max, elem_max, se.shape}, {se.budget});
    rep.witnesses = {{"found", found.has_value()}};
    rep.witnesses["t0"] = found ? j_big(found->t0) : Json();
    rep.witnesses["generators"] = found ? j_set(found->generators) : Json();
    rep.counts = {{"target_size", target.size()}};
    rep.verdict = found ? Verdict::pass : Verdict::fail;
  }));

  // ---- family ----
  auto* c_family = app.add_subcommand("family", "Finite upward-closed family algebra");
  c_family->require_subcommand(1);
  struct {
    int u = 0;
    std::vector<std::string> fams;
    int cap = 5;
    bool tilde = false;
  } fa;
  auto add_family_leaf = [&](const char* name, const char* desc, int n_fams) {
    auto* c = c_family->add_subcommand(name, desc);
    c->add_option("--u", fa.u, "Universe size")->required();
    c->add_option("family", fa.fams, "Family generators, e.g. \"1,2;3\"")
        ->expected(n_fams);
    return c;
  };
  auto family_common = [&](const char* name, int n_fams) {
    rep.command = std::string("family ") + name;
    std::vector<std::string> argv{"family", name, "--u=" + std::to_string(fa.u)};
    std::vector<FiniteFamily> fs;
    Json echoed = Json::array();
    for (int i = 0; i < n_fams; ++i) {
      fs.emplace_back(fa.u, parse_generators(fa.fams[static_cast<std::size_t>(i)]));
      echoed.push_back(fa.fams[static_cast<std::size_t>(i)]);
    }
    rep.params = {{"u", fa.u}, {"family", echoed}};
    argv.push_back("--");
    for (const std::string& f : fa.fams) argv.push_back(f);
    rep.params["argv"] = argv;
    return fs;
  };
  add_family_leaf("dual", "Sets meeting every member", 1)->callback(timed([&] {
    auto fs = family_common("dual", 1);
    rep.witnesses = {{"dual", j_family(dual_family(fs[0]))}};
  }));
  add_family_leaf("join", "Upward closure of pairwise intersections", 2)
      ->callback(timed([&] {
        auto fs = family_common("join", 2);
        rep.witnesses = {{"join", j_family(join_families(fs[0], fs[1]))}};
      }));
  auto* c_classify = add_family_leaf("classify", "Proper/filter/ramsey classification", 1);
  c_classify->add_option("--cap", fa.cap, "Universe cap for the exhaustive scan")
      ->capture_default_str();
  c_classify->callback(timed([&] {
    auto fs = family_common("classify", 1);
    rep.params["cap"] = fa.cap;
    FamilyClassification cl = classify_family(fs[0], fa.cap);
    rep.witnesses = {{"proper", cl.proper},
                     {"filter", cl.filter},
                     {"ramsey", cl.ramsey},
                     {"dual_is_filter", cl.dual_is_filter}};
  }));
  add_family_leaf("sharp", "Largest filter-like core", 1)->callback(timed([&] {
    auto fs = family_common("sharp", 1);
    rep.witnesses = {{"sharp", j_family(sharp_core(fs[0]))}};
  }));
  auto* c_prop51 = add_family_leaf("prop51", "Structure laws of the sharp core", 1);
  c_prop51->add_option("--cap", fa.cap, "Universe cap for the exhaustive scan")
      ->capture_default_str();
  c_prop51->callback(timed([&] {
    auto fs = family_common("prop51", 1);
    rep.params["cap"] = fa.cap;
    SharpCoreLaws laws = sharp_core_laws(fs[0], fa.cap);
    rep.witnesses = {{"filter_contained", j_clause(laws.filter_contained)},
                     {"dual_symmetric", j_clause(laws.dual_symmetric)},
                     {"filter_fixed", j_clause(laws.filter_fixed)},
                     {"ramsey_gives_dual", j_clause(laws.ramsey_gives_dual)}};
    rep.verdict = laws.all_pass() ? Verdict::pass : Verdict::fail;
  }));
  auto* c_gamma = add_family_leaf("gamma", "Translation hull (or core with --tilde)", 1);
  c_gamma->add_flag("--tilde", fa.tilde, "Largest translation-stable subfamily");
  c_gamma->callback(timed([&] {
    auto fs = family_common("gamma", 1);
    rep.params["tilde"] = fa.tilde;
    if (fa.tilde) {
      Json argv = rep.params["argv"];
      argv.insert(argv.begin() + 2, "--tilde");
      rep.params["argv"] = argv;
    }
    FiniteFamily out = fa.tilde ? tilde_gamma_window(fs[0]) : gamma_window(fs[0]);
    rep.witnesses = {{"family", j_family(out)}};
  }));

  // ---- refine ----
  struct {
    std::string source;
    int level = 1;
    int request = 8;
    std::uint64_t budget = 100'000;
    std::uint64_t probe = 0;
  } rf;
  auto* c_refine = app.add_subcommand("refine", "Raise divisibility of an increasing stream");
  c_refine->add_option("--source", rf.source, "Stream spec")->required();
  c_refine->add_option("--level", rf.level, "Target divisibility exponent")->required();
  c_refine->add_option("--request", rf.request, "Values to produce")->capture_default_str();
  c_refine->add_option("--budget", rf.budget, "Source values consumed at most")
      ->capture_default_str();
  c_refine->add_option("--probe", rf.probe, "Lookahead before committing to triple sums")
      ->capture_default_str();
  c_refine->callback(timed([&] {
    rep.command = "refine";
    rep.params = {{"source", rf.source},   {"level", rf.level},
                  {"request", rf.request}, {"budget", rf.budget},
                  {"probe", rf.probe},
                  {"argv", Json::array({"refine", "--source=" + rf.source,
                                        "--level=" + std::to_string(rf.level),
                                        "--request=" + std::to_string(rf.request),
                                        "--budget=" + std::to_string(rf.budget),
                                        "--probe=" + std::to_string(rf.probe)})}};
    RefineStep st = refine_beyond(parse_stream(rf.source), rf.level,
                                  {rf.request, rf.budget, rf.probe});
    rep.witnesses = {{"values", j_bigs(st.refined.prefix(rf.request))},
                     {"case", st.used == RefineCase::subsequence ? "subsequence"
                                                                 : "triple-sums"},
                     {"delta", st.delta}};
  }));

  // ---- witness ----
  struct {
    std::string u = "0";
    std::string k0 = "pow3";
    int depth = 0;
    int min_level = 0;
    std::uint64_t budget = 100'000;
    std::uint64_t probe = 243;
    int prefix = 10;
  } wi;
  auto* c_witness =
      app.add_subcommand("witness", "Build a certified translated signed-sum witness");
  c_witness->add_option("--u", wi.u, "Starting integer")->capture_default_str();
  c_witness->add_option("--k0", wi.k0, "Stream spec")->capture_default_str();
  c_witness->add_option("--depth", wi.depth, "Number of blocks")->required();
  c_witness->add_option("--min-level", wi.min_level, "Force the first block level")
      ->capture_default_str();
  c_witness->add_option("--budget", wi.budget, "Per-step scan budget")->capture_default_str();
  c_witness->add_option("--probe", wi.probe, "Per-step lookahead")->capture_default_str();
  c_witness->add_option("--prefix", wi.prefix, "Blocks sampled for the value set")
      ->capture_default_str();
  c_witness->callback(timed([&] {
    rep.command = "witness";
    rep.params = {{"u", wi.u},
                  {"k0", wi.k0},
                  {"depth", wi.depth},
                  {"min_level", wi.min_level},
                  {"budget", wi.budget},
                  {"probe", wi.probe},
                  {"prefix", wi.prefix},
                  {"argv", Json::array({"witness", "--u=" + wi.u, "--k0=" + wi.k0,
                                        "--depth=" + std::to_string(wi.depth),
                                        "--min-level=" + std::to_string(wi.min_level),
                                        "--budget=" + std::to_string(wi.budget),
                                        "--probe=" + std::to_string(wi.probe),
                                        "--prefix=" + std::to_string(wi.prefix)})}};
    SipWitness w = build_sip_witness(parse_big(wi.u), parse_stream(wi.k0), wi.depth,
                                     {wi.min_level, wi.budget, wi.probe});
    rep.witnesses = {{"t0", j_big(w.t0)},
                     {"blocks", j_bigs(w.blocks)},
                     {"type", to_string(w.block_type)},
                     {"translated_positive", j_set(w.translated_sip_positive(wi.prefix))}};
    rep.counts = {{"blocks", w.blocks.size()}};
  }));

  // ---- thm46 ----
  struct {
    int k = 3;
    std::string t0;
    std::string blocks;
    int count = 0;
  } t6;
  auto* c_thm46 = app.add_subcommand(
      "thm46", "Residue cycle: block sign flips walk the colors mod K");
  c_thm46->add_option("--K", t6.k, "Odd modulus >= 3")->capture_default_str();
  c_thm46->add_option("--t0", t6.t0, "Translate")->required();
  c_thm46->add_option("--blocks", t6.blocks, "Stream spec for the blocks")->required();
  c_thm46->add_option("--count", t6.count, "Blocks pulled (needs >= 2K+1)")->required();
  c_thm46->callback(timed([&] {
    rep.command = "thm46";
    rep.params = {{"K", t6.k},
                  {"t0", t6.t0},
                  {"blocks", t6.blocks},
                  {"count", t6.count},
                  {"argv", Json::array({"thm46", "--K=" + std::to_string(t6.k),
                                        "--t0=" + t6.t0, "--blocks=" + t6.blocks,
                                        "--count=" + std::to_string(t6.count)})}};
    SipWitness w = SipWitness::from_parts(parse_big(t6.t0),
                                          parse_stream(t6.blocks).prefix(t6.count));
    ResidueCycle rc = build_residue_cycle(w, t6.k);
    rep.witnesses = {{"s", j_bigs(rc.s)},
                     {"z", rc.z},
                     {"residues", rc.residues},
                     {"covers_all_residues", rc.covers_all_residues},
                     {"steps_match_type", rc.steps_match_type},
                     {"type", to_string(w.block_type)}};
    rep.verdict = rc.covers_all_residues && rc.steps_match_type ? Verdict::pass
                                                                : Verdict::fail;
  }));

  // ---- thm47 ----
  struct {
    int witnesses = 100;
    std::int64_t window = 729;
    std::int64_t t0_max = 30;
    int m = 2;
    std::uint64_t seed = 12345;
    std::uint64_t budget = 50'000'000;
  } t7;
  auto* c_thm47 = app.add_subcommand(
      "thm47", "Both color classes meet every witness; neither contains one whole");
  c_thm47->add_option("--witnesses", t7.witnesses, "Witnesses generated")
      ->capture_default_str();
  c_thm47->add_option("--window", t7.window, "Search window for class-0 generators")
      ->capture_default_str();
  c_thm47->add_option("--t0-max", t7.t0_max, "Largest translation scanned")
      ->capture_default_str();
  c_thm47->add_option("--m", t7.m, "Generator count for the shaped search")
      ->capture_default_str();
  c_thm47->add_option("--seed", t7.seed, "Generator seed")->capture_default_str();
  c_thm47->add_option("--budget", t7.budget, "Search budget")->capture_default_str();
  c_thm47->callback(timed([&] {
    rep.command = "thm47";
    rep.params = {{"witnesses", t7.witnesses},
                  {"window", t7.window},
                  {"t0_max", t7.t0_max},
                  {"m", t7.m},
                  {"seed", t7.seed},
                  {"budget", t7.budget},
                  {"argv", Json::array({"thm47",
                                        "--witnesses=" + std::to_string(t7.witnesses),
                                        "--window=" + std::to_string(t7.window),
                                        "--t0-max=" + std::to_string(t7.t0_max),
                                        "--m=" + std::to_string(t7.m),
                                        "--seed=" + std::to_string(t7.seed),
                                        "--budget=" + std::to_string(t7.budget)})}};
    std::mt19937_64 rng(t7.seed);
    const int scales[] = {1, 2, 4, 5, 7, 8};
    Json failures = Json::array();
    for (int i = 0; i < t7.witnesses; ++i) {
      BigInt u = static_cast<std::int64_t>(rng() % 61) - 30;
      BigInt scale = scales[rng() % 6];
      int first = 1 + static_cast<int>(rng() % 3);
      int step = 1 + static_cast<int>(rng() % 2);
      // Four blocks minimum: shallower witnesses have so few positive
      // translates that one class can miss them by accident.
      int depth = 4 + static_cast<int>(rng() % 3);
      SipWitness w =
          build_sip_witness(u, PlusFn::scaled_powers_of_three(scale, first, step), depth);
      bool has0 = false;
      bool has1 = false;
      const IntSet translated = w.translated_sip_positive(depth);
      for (const BigInt& v : translated.values())
        (color_class(v, 3) == 0 ? has0 : has1) = true;
      if (!has0 || !has1)
        failures.push_back(Json{{"index", i}, {"missing", has0 ? "A1" : "A0"}});
    }
    std::vector<BigInt> a0;
    for (std::int64_t t = 1; t <= t7.window; ++t)
      if (color_class(t, 3) == 0) a0.push_back(t);
    auto found = search_translated_sip(IntSet(std::move(a0)), t7.m,
                                       {t7.t0_max, t7.window, true}, {t7.budget});
    rep.witnesses = {{"intersection_failures", failures},
                     {"shaped_witness_found", found.has_value()}};
    rep.witnesses["t0"] = found ? j_big(found->t0) : Json();
    rep.witnesses["generators"] = found ? j_set(found->generators) : Json();
    rep.counts = {{"witnesses_checked", t7.witnesses}};
    rep.verdict = failures.empty() && !found ? Verdict::pass : Verdict::fail;
  }));

  // ---- rotate ----
  auto* c_rotate = app.add_subcommand("rotate", "Rational rotation experiments");
  c_rotate->require_subcommand(1);
  struct {
    std::string alpha = "610/987";
    std::int64_t horizon = 900;
    std::string x = "0";
    std::string n;
    std::vector<std::string> arcs;
    std::vector<std::string> arcs_u;
    std::vector<std::string> arcs_v;
    std::vector<std::string> seeds;
    int depth = 4;
    std::int64_t bound = 100'000;
    bool no_shortcut = false;
  } ro;
  auto add_rotate_leaf = [&](const char* name, const char* desc) {
    auto* c = c_rotate->add_subcommand(name, desc);
    c->add_option("--alpha", ro.alpha, "Rotation step p/q")->capture_default_str();
    c->add_option("--horizon", ro.horizon, "Window bound (must stay below q)")
        ->capture_default_str();
    return c;
  };
  auto rotate_common = [&](const char* name) {
    rep.command = std::string("rotate ") + name;
    rep.params = {{"alpha", ro.alpha}, {"horizon", ro.horizon}};
    return RotationConfig{parse_rat(ro.alpha), ro.horizon};
  };
  auto rotate_argv = [&](const char* name) {
    return std::vector<std::string>{"rotate", name, "--alpha=" + ro.alpha,
                                    "--horizon=" + std::to_string(ro.horizon)};
  };

  auto* c_orbit = add_rotate_leaf("orbit", "Chart value of the n-th orbit point");
  c_orbit->add_option("n", ro.n, "Orbit index")->required();
  c_orbit->callback(timed([&] {
    RotationConfig cfg = rotate_common("orbit");
    BigInt n = parse_big(ro.n);
    auto argv = rotate_argv("orbit");
    argv.push_back("--");
    argv.push_back(sipkit::to_string(n));
    rep.params["n"] = j_big(n);
    rep.params["argv"] = argv;
    rep.witnesses = {{"chart", j_rat(orbit_point(n, cfg).value())}};
  }));

  auto* c_hitting = add_rotate_leaf("hitting", "Orbit times landing in a set of arcs");
  c_hitting->add_option("--x", ro.x, "Starting point")->capture_default_str();
  c_hitting->add_option("--arc", ro.arcs, "Arc 'lo,hi' or '[lo,hi)'")->required();
  c_hitting->callback(timed([&] {
    RotationConfig cfg = rotate_common("hitting");
    ArcSet u = parse_arcs(ro.arcs);
    auto argv = rotate_argv("hitting");
    argv.push_back("--x=" + ro.x);
    for (const std::string& a : ro.arcs) argv.push_back("--arc=" + a);
    rep.params["x"] = ro.x;
    rep.params["arcs"] = ro.arcs;
    rep.params["argv"] = argv;
    IntSet hits = hitting_set(Angle(parse_rat(ro.x)), u, cfg);
    rep.witnesses = {{"hits", j_set(hits)}, {"set", u.to_string()}};
    rep.counts = {{"count", hits.size()}};
  }));

  auto* c_prop31 = add_rotate_leaf(
      "prop31", "Windowed check: hitting-time differences against shift hits");
  c_prop31->add_option("--arc-u", ro.arcs_u, "First set of arcs")->required();
  c_prop31->add_option("--arc-v", ro.arcs_v, "Second set of arcs")->required();
  c_prop31->callback(timed([&] {
    RotationConfig cfg = rotate_common("prop31");
    ArcSet u = parse_arcs(ro.arcs_u);
    ArcSet v = parse_arcs(ro.arcs_v);
    auto argv = rotate_argv("prop31");
    for (const std::string& a : ro.arcs_u) argv.push_back("--arc-u=" + a);
    for (const std::string& a : ro.arcs_v) argv.push_back("--arc-v=" + a);
    rep.params["arcs_u"] = ro.arcs_u;
    rep.params["arcs_v"] = ro.arcs_v;
    rep.params["argv"] = argv;
    HittingDifferenceReport hd = check_hitting_differences(u, v, cfg);
    rep.witnesses = {{"missing", j_bigs(hd.missing)},
                     {"unrealized", j_bigs(hd.unrealized)},
                     {"checked_bound", hd.checked_bound}};
    rep.counts = {{"hits_u", hd.hits_u.size()},
                  {"hits_v", hd.hits_v.size()},
                  {"differences", hd.differences.size()},
                  {"shift_hits", hd.shift_hits.size()}};
    rep.verdict = hd.verdict;
  }));

  auto* c_recur = add_rotate_leaf(
      "recur", "Greedy certified generators whose closure keeps hitting");
  c_recur->add_option("--arc", ro.arcs, "Target arcs")->required();
  c_recur->add_option("--depth", ro.depth, "Generators to build")->capture_default_str();
  c_recur->callback(timed([&] {
    RotationConfig cfg = rotate_common("recur");
    ArcSet u = parse_arcs(ro.arcs);
    auto argv = rotate_argv("recur");
    for (const std::string& a : ro.arcs) argv.push_back("--arc=" + a);
    argv.push_back("--depth=" + std::to_string(ro.depth));
    rep.params["arcs"] = ro.arcs;
    rep.params["depth"] = ro.depth;
    rep.params["argv"] = argv;
    RecurrentSip rs = build_recurrent_sip(u, ro.depth, cfg);
    rep.witnesses = {{"generators", j_set(rs.generators)},
                     {"closure_positive", j_set(rs.closure_positive)}};
    rep.counts = {{"closure_size", rs.closure_positive.size()}};
  }));

  auto* c_chain = add_rotate_leaf(
      "chain", "Greedy extension chain inside a half-arc, with doubling ledger");
  c_chain->add_option("seeds", ro.seeds, "Seed generators")->required();
  c_chain->add_option("--arc", ro.arcs, "Half-arc target")->required();
  c_chain->add_option("--depth", ro.depth, "Row cap including the seed")
      ->capture_default_str();
  c_chain->add_option("--bound", ro.bound, "Candidates scanned past the closure max")
      ->capture_default_str();
  c_chain->add_flag("--no-shortcut", ro.no_shortcut, "Always scan; skip the terminal proof");
  c_chain->callback(timed([&] {
    RotationConfig cfg = rotate_common("chain");
    ArcSet u = parse_arcs(ro.arcs);
    IntSet seed(parse_big_args(ro.seeds));
    auto argv = rotate_argv("chain");
    for (const std::string& a : ro.arcs) argv.push_back("--arc=" + a);
    argv.push_back("--depth=" + std::to_string(ro.depth));
    argv.push_back("--bound=" + std::to_string(ro.bound));
    if (ro.no_shortcut) argv.push_back("--no-shortcut");
    argv.push_back("--");
    argv.push_back(canonical_list(seed.values()));
    rep.params["arcs"] = ro.arcs;
    rep.params["depth"] = ro.depth;
    rep.params["bound"] = ro.bound;
    rep.params["no_shortcut"] = ro.no_shortcut;
    rep.params["seeds"] = j_set(seed);
    rep.params["argv"] = argv;
    ChainReport cr = extension_chain(u, seed, ro.depth, cfg, {ro.bound, !ro.no_shortcut});
    Json steps = Json::array();
    for (const ChainStep& st : cr.steps)
      steps.push_back(Json{{"added", j_big(st.added)},
                           {"set", j_set(st.set)},
                           {"best_sum", j_rat(st.best_sum)},
                           {"doubled", st.doubled}});
    rep.witnesses = {{"steps", steps},
                     {"end", to_string(cr.end)},
                     {"doubling_held", cr.doubling_held}};
    rep.counts = {{"rows", cr.steps.size()}};
    rep.verdict = cr.verdict;
  }));

  // ---- parse and render ----
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    res.exit_code = 0;
    res.output = app.help();
    return res;
  } catch (const CLI::CallForAllHelp&) {
    res.exit_code = 0;
    res.output = app.help("", CLI::AppFormatMode::All);
    return res;
  } catch (const CLI::ParseError& e) {
    res.exit_code = 64;
    res.output = std::string("error: ") + e.what() + "\n\n" + app.help();
    return res;
  } catch (const BudgetExceeded& e) {
    rep.verdict = Verdict::inconclusive;
    rep.witnesses["error"] = e.what();
    rep.counts["examined"] = e.examined();
  } catch (const HorizonExhausted& e) {
    rep.verdict = Verdict::inconclusive;
    rep.witnesses["error"] = e.what();
    rep.counts["horizon"] = e.horizon();
  } catch (const SourceExhausted& e) {
    rep.verdict = Verdict::inconclusive;
    rep.witnesses["error"] = e.what();
    rep.counts["produced"] = e.produced();
    rep.counts["budget_limited"] = e.budget_limited();
  } catch (const std::invalid_argument& e) {
    res.exit_code = 64;
    res.output = std::string("error: ") + e.what();
    return res;
  } catch (const std::domain_error& e) {
    res.exit_code = 64;
    res.output = std::string("error: ") + e.what();
    return res;
  }

  res.exit_code = rep.verdict == Verdict::pass ? 0 : rep.verdict == Verdict::fail ? 1 : 2;
  res.output = format == "csv" ? rep.to_csv() : rep.to_json().dump(2);
  return res;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  CliResult r = execute(args);
  (r.exit_code == 64 ? std::cerr : std::cout) << r.output << "\n";
  return r.exit_code;
}

}  // namespace sipkit::cli
