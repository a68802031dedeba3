#include <doctest.h>

#include <string>
#include <vector>

#include "triemap/bench.hpp"
#include "triemap/checks.hpp"
#include "triemap/matching.hpp"
#include "triemap/oracle.hpp"

using namespace triemap;

namespace {

Expr P(const char* t) { return parse_expr(t); }
VarName V(const char* n) { return VarName(n); }
std::vector<VarName> Vs(std::initializer_list<const char*> ns) {
  std::vector<VarName> out;
  for (const char* n : ns) out.emplace_back(n);
  return out;
}

std::vector<std::pair<Subst, Unit>> run_pattern(std::initializer_list<const char*> vars, const char* pat,
                                                const char* target) {
  return run_match(match_expr(PatExpr::closed(Vs(vars), P(pat)), AlphaExpr::closed(P(target))));
}

}  // namespace

TEST_CASE("canonical pattern keys") {
  CHECK(canon_pat_keys(Vs({"a", "b"}), P("(app (app (app (var f) (var a)) (var b)) (var a))")) ==
        PatKeys{{V("a"), 1}, {V("b"), 2}});
  CHECK(canon_pat_keys(Vs({"x", "g"}), P("(app (var f) (app (var g) (var x)))")) ==
        PatKeys{{V("g"), 1}, {V("x"), 2}});
  CHECK(canon_pat_keys(Vs({"p", "q"}), P("(app (var f) (var p))")) == PatKeys{{V("p"), 1}});
  // A lambda binding the same name hides the pattern variable.
  CHECK(canon_pat_keys(Vs({"x", "y"}), P("(app (lam x (var x)) (app (var y) (var x)))")) ==
        PatKeys{{V("y"), 1}, {V("x"), 2}});
  CHECK_THROWS_AS(canon_pat_keys(Vs({"x", "x"}), P("(var x)")), std::invalid_argument);
}

TEST_CASE("match computations") {
  using M = MatchComputation<int>;
  auto r = run_match(M::pure(5));
  REQUIRE(r.size() == 1);
  CHECK(r[0].first.empty());
  CHECK(r[0].second == 5);
  CHECK(run_match(M::failure()).empty());

  auto both = run_match(M::pure(1).alt(M::pure(2)));
  REQUIRE(both.size() == 2);
  CHECK(both[0].second == 1);
  CHECK(both[1].second == 2);

  CHECK(run_match(lift_optional<int>(std::nullopt)).empty());
  CHECK(run_match(lift_optional<int>(4)).at(0).second == 4);

  CHECK(run_match(refine_match([](const Subst&) -> std::optional<Subst> { return std::nullopt; })).empty());
  auto refined = run_match(refine_match([](const Subst& s) -> std::optional<Subst> {
                             Subst t = s;
                             t.emplace(1, P("(var e)"));
                             return t;
                           }).then(M::pure(0)));
  REQUIRE(refined.size() == 1);
  CHECK(refined[0].first.at(1) == P("(var e)"));

  // Alternation is associative with failure as identity.
  std::vector<M> samples = {M::failure(), M::pure(1), M::pure(2).alt(M::pure(3)),
                            refine_match([](const Subst& s) -> std::optional<Subst> {
                              Subst t = s;
                              t.emplace(9, P("(var z)"));
                              return t;
                            }).then(M::pure(4))};
  auto flat = [](const M& m) {
    std::vector<std::pair<std::size_t, int>> out;
    for (const auto& [s, v] : run_match(m)) out.emplace_back(s.size(), v);
    return out;
  };
  for (const auto& a : samples) {
    CHECK(flat(a.alt(M::failure())) == flat(a));
    CHECK(flat(M::failure().alt(a)) == flat(a));
    for (const auto& b : samples) {
      auto ab = flat(a);
      auto fb = flat(b);
      ab.insert(ab.end(), fb.begin(), fb.end());
      CHECK(flat(a.alt(b)) == ab);
      for (const auto& c : samples) CHECK(flat(a.alt(b).alt(c)) == flat(a.alt(b.alt(c))));
    }
  }
}

TEST_CASE("bind threads the substitution") {
  auto c = match_pat_var(1, AlphaExpr::closed(P("(var a)"))).then(match_pat_var(1, AlphaExpr::closed(P("(var a)"))));
  CHECK(run_match(c).size() == 1);
  auto d = match_pat_var(1, AlphaExpr::closed(P("(var a)"))).then(match_pat_var(1, AlphaExpr::closed(P("(var b)"))));
  CHECK(run_match(d).empty());
}

TEST_CASE("match_pat_var") {
  DBEnv y1 = empty_dbe().extend(V("y"));
  auto ok = run_match(match_pat_var(1, AlphaExpr{y1, P("(var z)")}));
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].first == Subst{{1, P("(var z)")}});

  CHECK(run_match(match_pat_var(1, AlphaExpr{y1, P("(var y)")})).empty());

  auto bound = refine_match([](const Subst&) -> std::optional<Subst> {
                 return Subst{{1, P("(app (var g) (var v))")}};
               }).then(match_pat_var(1, AlphaExpr::closed(P("(app (var g) (var v))"))));
  auto res = run_match(bound);
  REQUIRE(res.size() == 1);
  CHECK(res[0].first == Subst{{1, P("(app (var g) (var v))")}});
}

TEST_CASE("repeated variable match and non-match") {
  auto yes = run_pattern({"x"}, "(app (app (var f) (var x)) (var x))",
                         "(app (app (var f) (app (var g) (var v))) (app (var g) (var v)))");
  REQUIRE(yes.size() == 1);
  CHECK(yes[0].first == Subst{{1, P("(app (var g) (var v))")}});
  CHECK(run_pattern({"x"}, "(app (app (var f) (var x)) (var x))", "(app (app (var f) (app (var g) (var v))) (var v))")
            .empty());
}

TEST_CASE("map/map rewrite substitution") {
  auto r = run_pattern({"f", "g", "xs"}, "(app (app (var map) (var f)) (app (app (var map) (var g)) (var xs)))",
                       "(app (app (var map) (var double)) (app (app (var map) (var square)) (var nums)))");
  REQUIRE(r.size() == 1);
  PatKeys keys = canon_pat_keys(Vs({"f", "g", "xs"}),
                                P("(app (app (var map) (var f)) (app (app (var map) (var g)) (var xs)))"));
  CHECK(r[0].first.at(keys.at(V("f"))) == P("(var double)"));
  CHECK(r[0].first.at(keys.at(V("g"))) == P("(var square)"));
  CHECK(r[0].first.at(keys.at(V("xs"))) == P("(var nums)"));
}

TEST_CASE("capture is rejected") {
  CHECK(run_pattern({"p"}, "(lam x (var p))", "(lam y (var y))").empty());
  auto r = run_pattern({"p"}, "(lam x (var p))", "(lam y (var z))");
  REQUIRE(r.size() == 1);
  CHECK(r[0].first == Subst{{1, P("(var z)")}});
  // A pattern binder is matched level for level.
  CHECK(run_pattern({}, "(lam x (var x))", "(lam y (var y))").size() == 1);
  CHECK(run_pattern({}, "(lam x (lam y (var x)))", "(lam a (lam b (var b)))").empty());
  // A shadowed pattern variable is an ordinary bound variable.
  CHECK(run_pattern({"x"}, "(lam x (var x))", "(lam q (var q))").size() == 1);
  CHECK(run_pattern({"x"}, "(lam x (var x))", "(lam q (var r))").empty());
}

TEST_CASE("repeated variables compare modulo alpha") {
  CHECK(run_pattern({"x"}, "(app (var x) (var x))", "(app (lam a (var a)) (lam b (var b)))").size() == 1);
}

TEST_CASE("pattern equality") {
  auto pe = [](std::initializer_list<const char*> vs, const char* body) { return PatExpr::closed(Vs(vs), P(body)); };
  CHECK(pe({"a"}, "(app (var f) (var a))") == pe({"b"}, "(app (var f) (var b))"));
  CHECK(pe({"a", "b"}, "(app (var a) (var b))") == pe({"b", "a"}, "(app (var b) (var a))"));
  CHECK_FALSE(pe({"a", "b"}, "(app (var a) (var b))") == pe({"a"}, "(app (var a) (var b))"));
  CHECK_FALSE(pe({"a"}, "(app (var a) (var a))") == pe({"a", "b"}, "(app (var a) (var b))"));
  CHECK(pe({}, "(lam x (var x))") == pe({}, "(lam y (var y))"));
  CHECK(pe({"a", "q"}, "(app (var f) (var a))") == pe({"a"}, "(app (var f) (var a))"));
}

TEST_CASE("soundness, uniqueness and completeness against the naive matcher") {
  bench::Rng rng(31);
  int matched = 0;
  for (int i = 0; i < 500; ++i) {
    auto p = checks::random_pattern(rng, 12);
    Expr t = checks::random_target(rng, {p});
    PatExpr pat = PatExpr::closed(p.vars, p.body);
    auto res = run_match(match_expr(pat, AlphaExpr::closed(t)));
    auto want = oracle::oracle_match_one(p.vars, p.body, t);
    REQUIRE(res.size() <= 1);
    REQUIRE(res.empty() == !want.has_value());
    if (res.empty()) continue;
    ++matched;
    const Subst& s = res[0].first;
    CHECK(alpha_eq(AlphaExpr::closed(instantiate(pat, s)), AlphaExpr::closed(t)));
    CHECK(s.size() == want->size());
    for (const auto& [name, key] : pat.keys()) {
      REQUIRE(want->count(name));
      CHECK(alpha_eq(AlphaExpr::closed(s.at(key)), AlphaExpr::closed(want->at(name))));
    }
  }
  CHECK(matched > 100);
}

TEST_CASE("instantiate avoids capture") {
  PatExpr pat = PatExpr::closed(Vs({"p"}), P("(lam x (app (var p) (var x)))"));
  Expr e = instantiate(pat, Subst{{1, P("(var x)")}});
  CHECK(alpha_eq(AlphaExpr::closed(e), AlphaExpr::closed(P("(lam z (app (var x) (var z)))"))));
  CHECK(run_match(match_expr(pat, AlphaExpr::closed(e))).size() == 1);
}
