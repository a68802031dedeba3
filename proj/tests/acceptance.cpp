// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "triemap/bench.hpp"
#include "triemap/checks.hpp"
#include "triemap/exprmap.hpp"
#include "triemap/matching.hpp"
#include "triemap/oracle.hpp"
#include "triemap/patmap.hpp"
#include "triemap/triemap.hpp"

using namespace triemap;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Expr P(const char* t) { return parse_expr(t); }
std::vector<VarName> Vs(std::initializer_list<const char*> ns) {
  std::vector<VarName> out;
  for (const char* n : ns) out.emplace_back(n);
  return out;
}

// Runs `trials` trials; returns the first counterexample.
std::optional<std::string> repeat(int trials, const std::function<std::optional<std::string>()>& trial) {
  for (int i = 0; i < trials; ++i) {
    if (auto bad = trial()) return "trial " + std::to_string(i) + ": " + *bad;
  }
  return std::nullopt;
}

void randomized(int n, const char* what, int trials, double limit_s,
                const std::function<std::optional<std::string>()>& trial) {
  auto t0 = Clock::now();
  auto bad = repeat(trials, trial);
  double s = seconds_since(t0);
  std::string detail = std::to_string(trials) + " " + what + " in " + fmt("%.2f s", s) +
                       (limit_s > 0 ? fmt(" (limit %.0f s)", limit_s) : "");
  if (bad) detail += "; counterexample " + *bad;
  report(n, !bad && (limit_s <= 0 || s < limit_s), detail);
}

// Worked examples, each compared with a fixed expected result.
std::vector<std::string> example_failures() {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const char* name) {
    if (!ok) bad.emplace_back(name);
  };

  expect(canon_pat_keys(Vs({"a", "b"}), P("(app (app (app (var f) (var a)) (var b)) (var a))")) ==
             PatKeys{{VarName("a"), 1}, {VarName("b"), 2}},
         "canonical row 1");
  expect(canon_pat_keys(Vs({"x", "g"}), P("(app (var f) (app (var g) (var x)))")) ==
             PatKeys{{VarName("g"), 1}, {VarName("x"), 2}},
         "canonical row 2");

  auto one = [](std::initializer_list<const char*> vs, const char* pat, const char* target) {
    return run_match(match_expr(PatExpr::closed(Vs(vs), P(pat)), AlphaExpr::closed(P(target))));
  };
  auto rep = one({"x"}, "(app (app (var f) (var x)) (var x))",
                 "(app (app (var f) (app (var g) (var v))) (app (var g) (var v)))");
  expect(rep.size() == 1 && rep[0].first == Subst{{1, P("(app (var g) (var v))")}}, "repeated variable match");
  expect(one({"x"}, "(app (app (var f) (var x)) (var x))", "(app (app (var f) (app (var g) (var v))) (var v))")
             .empty(),
         "repeated variable non-match");

  PatMap<std::string> mm = PatMap<std::string>{}.insert(
      Vs({"f", "g", "xs"}), P("(app (app (var map) (var f)) (app (app (var map) (var g)) (var xs)))"), "mapmap");
  auto mr = mm.lookup(P("(app (app (var map) (var double)) (app (app (var map) (var square)) (var nums)))"));
  expect(mr.size() == 1 &&
             mr[0].first == PatSubst{{VarName("f"), P("(var double)")},
                                     {VarName("g"), P("(var square)")},
                                     {VarName("xs"), P("(var nums)")}},
         "map/map substitution");

  expect(one({"p"}, "(lam x (var p))", "(lam y (var y))").empty(), "capture rejected");
  auto cap = one({"p"}, "(lam x (var p))", "(lam y (var z))");
  expect(cap.size() == 1 && cap[0].first == Subst{{1, P("(var z)")}}, "capture-free match");

  PatMap<std::string> pm;
  pm = pm.insert(Vs({"p"}), P("(app (app (var f) (var p)) (var T))"), "v1");
  pm = pm.insert(Vs({"q"}), P("(app (app (var f) (var q)) (var F))"), "v2");
  auto two = pm.lookup(P("(app (app (var f) (var e)) (var T))"));
  expect(two.size() == 1 && two[0].second == "v1" && two[0].first == PatSubst{{VarName("p"), P("(var e)")}},
         "two-pattern lookup");

  PatMap<std::string> ub = PatMap<std::string>{}.insert(Vs({"p", "q"}), P("(app (var f) (var p))"), "v");
  auto u = ub.lookup(P("(app (var f) (var a))"));
  expect(u.size() == 1 && u[0].first == PatSubst{{VarName("p"), P("(var a)")}}, "unbound q");
  return bad;
}

// Inner map for exercising the SEMap state machine in isolation.
template <class V>
struct PlainInner {
  std::map<int, V> m;

  template <class W>
  using rebind = PlainInner<W>;

  const V* lookup(int k) const {
    auto it = m.find(k);
    return it == m.end() ? nullptr : &it->second;
  }
  PlainInner alter(int k, const TF<V>& tf) const {
    PlainInner out = *this;
    auto v = tf(lookup(k) ? std::optional<V>(*lookup(k)) : std::nullopt);
    if (v) {
      out.m[k] = *v;
    } else {
      out.m.erase(k);
    }
    return out;
  }
  template <class R, class F>
  R foldr(F&& f, R z) const {
    for (auto it = m.rbegin(); it != m.rend(); ++it) z = f(it->second, std::move(z));
    return z;
  }
  template <class F>
  PlainInner union_with(F&& f, const PlainInner& r) const {
    PlainInner out = *this;
    for (const auto& [k, v] : r.m) {
      auto it = out.m.find(k);
      if (it == out.m.end()) {
        out.m.emplace(k, v);
      } else {
        it->second = f(it->second, v);
      }
    }
    return out;
  }
  template <class G>
  PlainInner filter_map(G&& g) const {
    PlainInner out;
    for (const auto& [k, v] : m) {
      if (auto w = g(v)) out.m.emplace(k, *w);
    }
    return out;
  }
  template <class W, class F>
  PlainInner<W> map_values(F&& f) const {
    PlainInner<W> out;
    for (const auto& [k, v] : m) out.m.emplace(k, f(v));
    return out;
  }
};

// Transformers applied in every cell, as functions on an optional int.
std::vector<std::pair<std::string, std::function<std::optional<int>(std::optional<int>)>>> transformers() {
  return {
      {"delete", [](std::optional<int>) { return std::optional<int>{}; }},
      {"set", [](std::optional<int>) { return std::optional<int>(40); }},
      {"bump", [](std::optional<int> v) { return std::optional<int>(v ? *v + 1 : 5); }},
      {"keep", [](std::optional<int> v) { return v; }},
  };
}

SEShape expected_shape(SEShape before, std::size_t entries_after) {
  if (before == SEShape::Multi) return SEShape::Multi;
  if (entries_after == 0) return SEShape::Empty;
  return entries_after == 1 ? SEShape::Single : SEShape::Multi;
}

std::string shape_name(SEShape s) {
  return s == SEShape::Empty ? "Empty" : s == SEShape::Single ? "Single" : "Multi";
}

// Every shape x transformer x key-relation cell for SEMap and for the
// matching trie's singleton layer, checked against a std::map model.
std::vector<std::string> transition_failures(int& cells) {
  std::vector<std::string> bad;
  using S = SEMap<int, int, PlainInner<int>>;
  struct Start {
    SEShape shape;
    std::map<int, int> model;
    std::vector<std::pair<std::string, int>> keys;
  };
  std::vector<Start> starts = {
      {SEShape::Empty, {}, {{"any", 1}}},
      {SEShape::Single, {{1, 7}}, {{"same", 1}, {"different", 2}}},
      {SEShape::Multi, {{1, 7}, {2, 9}}, {{"present", 1}, {"absent", 3}}},
  };
  for (const auto& st : starts) {
    S m;
    for (const auto& [k, v] : st.model) m = m.alter(k, const_tf<int>(v));
    if (m.shape() != st.shape) bad.push_back("SEMap setup " + shape_name(st.shape));
    for (const auto& [rel, key] : st.keys) {
      for (const auto& [tname, t] : transformers()) {
        ++cells;
        std::map<int, int> want = st.model;
        auto cur = want.count(key) ? std::optional<int>(want.at(key)) : std::nullopt;
        if (auto nv = t(cur)) {
          want[key] = *nv;
        } else {
          want.erase(key);
        }
        S after = m.alter(key, TF<int>(t));
        bool ok = after.shape() == expected_shape(st.shape, want.size()) && after.size() == want.size();
        for (int k = 1; k <= 3; ++k) {
          const int* got = after.lookup(k);
          auto w = want.find(k);
          ok = ok && ((got == nullptr) == (w == want.end())) && (!got || *got == w->second);
        }
        if (!ok) bad.push_back("SEMap " + shape_name(st.shape) + "/" + rel + "/" + tname);
      }
    }
  }

  // Matching trie: keys are patterns; "same" is a renamed copy.
  using T = MExprTrie<int>;
  using Slot = MSlot<int>;
  struct Pat {
    PatExpr pat;
    PatExpr renamed;
    Expr target;
  };
  auto pe = [](std::initializer_list<const char*> vs, const char* b) { return PatExpr::closed(Vs(vs), P(b)); };
  std::vector<Pat> pats = {
      {pe({"x"}, "(app (var f) (var x))"), pe({"y"}, "(app (var f) (var y))"), P("(app (var f) (var t))")},
      {pe({}, "(app (var g) (var a))"), pe({}, "(app (var g) (var a))"), P("(app (var g) (var a))")},
      {pe({}, "(lam x (var c))"), pe({}, "(lam z (var c))"), P("(lam q (var c))")},
  };
  auto lift = [](const std::function<std::optional<int>(std::optional<int>)>& t) -> TF<Slot> {
    return [t](std::optional<Slot> s) -> std::optional<Slot> {
      auto v = t(s ? std::optional<int>(s->value()) : std::nullopt);
      return v ? std::optional<Slot>(Slot{*v}) : std::nullopt;
    };
  };
  std::vector<Start> mstarts = {
      {SEShape::Empty, {}, {{"any", 0}}},
      {SEShape::Single, {{0, 7}}, {{"same", 0}, {"different", 1}}},
      {SEShape::Multi, {{0, 7}, {2, 9}}, {{"present", 0}, {"absent", 1}}},
  };
  for (const auto& st : mstarts) {
    T m;
    for (const auto& [k, v] : st.model) m = m.alter(pats[k].pat, const_tf<Slot>(Slot{v}));
    if (m.shape() != st.shape) bad.push_back("match trie setup " + shape_name(st.shape));
    for (const auto& [rel, key] : st.keys) {
      for (const auto& [tname, t] : transformers()) {
        ++cells;
        std::map<int, int> want = st.model;
        auto cur = want.count(key) ? std::optional<int>(want.at(key)) : std::nullopt;
        if (auto nv = t(cur)) {
          want[key] = *nv;
        } else {
          want.erase(key);
        }
        T after = m.alter(pats[key].renamed, lift(t));
        bool ok = after.shape() == expected_shape(st.shape, want.size());
        for (int k = 0; k < 3; ++k) {
          auto res = run_match(after.lookup(AlphaExpr::closed(pats[k].target)));
          auto w = want.find(k);
          if (w == want.end()) {
            ok = ok && res.empty();
          } else {
            ok = ok && res.size() == 1 && res[0].second->value() == w->second;
          }
        }
        if (!ok) bad.push_back("match trie " + shape_name(st.shape) + "/" + rel + "/" + tname);
      }
    }
  }
  return bad;
}

std::int64_t oracle_sum(const oracle::AssocMap<bench::Value>& m) {
  std::int64_t s = 0;
  for (const auto& [k, v] : m.entries()) s += v;
  return s;
}

template <class M>
std::int64_t std_sum(const M& m) {
  std::int64_t s = 0;
  for (const auto& [k, v] : m) s += v;
  return s;
}

std::int64_t tm_sum(const bench::TrieBaseline& m) {
  return m.foldr([](bench::Value v, bench::Value acc) { return v + acc; }, bench::Value{0});
}

bench::PrefixKind prefix_for(const std::string& suite) {
  auto ends = [&](const char* s) { return suite.ends_with(s); };
  if (ends("_lam")) return bench::PrefixKind::Lam;
  if (ends("_app1")) return bench::PrefixKind::App1;
  if (ends("_app2")) return bench::PrefixKind::App2;
  return bench::PrefixKind::None;
}

// Fold sums of the maps each suite works on, for all three implementations,
// against the association-list oracle built from the same corpus.
std::vector<std::string> fold_failures(std::size_t& compared) {
  std::vector<std::string> bad;
  bench::BenchParams params{1000, 30, 42, 3, 100};
  bench::Harness h(params);
  for (const auto& suite : bench::suite_names()) {
    const bench::Corpus& c = h.corpus(prefix_for(suite));
    std::size_t n = c.exprs.size();
    oracle::AssocMap<bench::Value> whole, lo, hi;
    for (std::size_t i = 0; i < n; ++i) {
      auto k = AlphaExpr::closed(c.exprs[i]);
      whole = whole.insert(k, static_cast<bench::Value>(i));
      (i < n / 2 ? lo : hi) = (i < n / 2 ? lo : hi).insert(k, static_cast<bench::Value>(i));
    }
    auto plus = [](bench::Value a, bench::Value b) { return a + b; };
    std::int64_t want = oracle_sum(whole);
    auto tm = bench::build_tm(c);
    auto om = bench::build_om(c);
    auto hm = bench::build_hm(c);
    std::vector<std::pair<std::string, std::int64_t>> got = {
        {"TM", tm_sum(tm)}, {"OM", std_sum(om)}, {"HM", std_sum(hm)}};

    if (suite == "union") {
      want = oracle_sum(lo.union_with(plus, hi));
      bench::TrieBaseline tl, th;
      bench::OrderedBaseline ol, oh;
      bench::HashBaseline hl, hh;
      for (std::size_t i = 0; i < n; ++i) {
        auto k = AlphaExpr::closed(c.exprs[i]);
        auto v = static_cast<bench::Value>(i);
        if (i < n / 2) {
          tl = tl.insert(k, v);
          ol[k] = v;
          hl[k] = v;
        } else {
          th = th.insert(k, v);
          oh[k] = v;
          hh[k] = v;
        }
      }
      for (const auto& [k, v] : oh) ol[k] += v;
      for (const auto& [k, v] : hh) hl[k] += v;
      got = {{"TM", tm_sum(tl.union_with(plus, th))}, {"OM", std_sum(ol)}, {"HM", std_sum(hl)}};
    } else if (suite == "insert_lookup_one") {
      bench::Rng rng(params.seed ^ 0x5eedULL);
      Expr fresh = bench::fresh_expr(c, rng);
      auto k = AlphaExpr::closed(fresh);
      auto v = static_cast<bench::Value>(n);
      want = oracle_sum(whole.insert(k, v));
      om[k] = v;
      hm[k] = v;
      got = {{"TM", tm_sum(tm.insert(k, v))}, {"OM", std_sum(om)}, {"HM", std_sum(hm)}};
    }
    for (const auto& [impl, sum] : got) {
      ++compared;
      if (sum != want) bad.push_back(suite + "/" + impl + " " + std::to_string(sum) + " != " + std::to_string(want));
    }
    if (suite == "fold" || suite == "union") {
      for (auto impl : {bench::Impl::TM, bench::Impl::OM, bench::Impl::HM}) {
        ++compared;
        auto r = h.run(suite, impl);
        if (r.check != want) bad.push_back(suite + " harness/" + std::string(bench::impl_name(impl)));
      }
    }
  }
  return bad;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return out;
}

double census_ratio(std::size_t expr_size) {
  bench::CorpusParams cp;
  cp.map_size = 1000;
  cp.expr_size = expr_size;
  cp.prefix = bench::PrefixKind::App1;
  cp.prefix_len = 100;
  bench::Corpus c = bench::make_corpus(cp);
  std::size_t constructors = 0;
  for (const auto& e : c.exprs) constructors += e.size();
  return static_cast<double>(node_census(bench::build_tm(c))) / static_cast<double>(constructors);
}

}  // namespace

int main() {
  bench::Rng rng(20240601);

  randomized(1, "law trials", 10000, 30, [&] { return checks::law_trial(rng); });
  randomized(2, "100-op sequences", 1000, 60, [&] { return checks::exprmap_sequence_trial(rng, 100, 15); });
  randomized(3, "renaming pairs", 1000, 0, [&] { return checks::renaming_trial(rng); });
  randomized(4, "PatMap of 500 patterns x 500 targets", 1, 120, [&] { return checks::match_trial(rng, 500, 500); });

  auto ex = example_failures();
  report(5, ex.empty(), ex.empty() ? "all worked examples reproduce" : "mismatch: " + join(ex));

  int cells = 0;
  auto tr = transition_failures(cells);
  report(6, tr.empty(), std::to_string(cells) + " transition cells" + (tr.empty() ? "" : "; wrong: " + join(tr)));

  {
    bench::Harness h(bench::BenchParams{10000, 100, 42, 5, 100});
    auto tm = h.run("lookup_lam", bench::Impl::TM);
    auto om = h.run("lookup_lam", bench::Impl::OM);
    double ratio = static_cast<double>(tm.total_ns) / static_cast<double>(om.total_ns);
    report(7, ratio <= 0.5 && tm.check == om.check,
           fmt("lookup_lam TM %.0f ns, OM %.0f ns, ratio %.3f (bound 0.5)", static_cast<double>(tm.total_ns),
               static_cast<double>(om.total_ns), ratio));
  }

  {
    bench::Harness small(bench::BenchParams{1000, 100, 42, 5, 100});
    bench::Harness large(bench::BenchParams{10000, 100, 42, 5, 100});
    double a = small.run("lookup", bench::Impl::TM).per_op_ns;
    double b = large.run("lookup", bench::Impl::TM).per_op_ns;
    report(8, b <= 2.0 * a, fmt("TM per lookup %.1f ns at M=1000, %.1f ns at M=10000, ratio %.2f (bound 2.0)", a, b, b / a));
  }

  {
    double r10 = census_ratio(10);
    double r100 = census_ratio(100);
    report(9, r10 <= 0.20,
           fmt("space_app1 census / key constructors = %.4f at E=10 (bound 0.20); %.4f at E=100 for reference", r10,
               r100));
  }

  std::size_t compared = 0;
  auto fo = fold_failures(compared);
  report(10, fo.empty(), std::to_string(compared) + " fold sums equal the oracle" + (fo.empty() ? "" : "; wrong: " + join(fo)));

  std::printf("%s\n", failures == 0 ? "ALL PASS" : "SOME FAILED");
  return failures == 0 ? 0 : 1;
}
