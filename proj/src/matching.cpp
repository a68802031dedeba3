#include "triemap/matching.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace triemap {

namespace {

bool bind_pat_var(PatKey pk, const DBEnv& env, const Expr& e, Subst& s) {
  if (!no_captured(env, e)) return false;
  auto it = s.find(pk);
  if (it == s.end()) {
    s.emplace(pk, e);
    return true;
  }
  return eq_expr(e, it->second);
}

bool match_in(const PatExpr& pat, const AlphaExpr& target, Subst& s) {
  const Expr& p = pat.body().expr;
  const Expr& t = target.expr;
  switch (p.kind()) {
    case ExprKind::Var: {
      if (auto plevel = pat.body().env.lookup(p.name())) {
        return t.is_var() && target.env.lookup(t.name()) == plevel;
      }
      auto pk = pat.keys().find(p.name());
      if (pk != pat.keys().end()) return bind_pat_var(pk->second, target.env, t, s);
      return t.is_var() && !target.env.lookup(t.name()) && t.name() == p.name();
    }
    case ExprKind::App:
      if (!t.is_app()) return false;
      return match_in(pat.with_body(AlphaExpr{pat.body().env, p.fun()}), AlphaExpr{target.env, t.fun()}, s) &&
             match_in(pat.with_body(AlphaExpr{pat.body().env, p.arg()}), AlphaExpr{target.env, t.arg()}, s);
    case ExprKind::Lam:
      if (!t.is_lam()) return false;
      return match_in(pat.with_body(AlphaExpr{pat.body().env.extend(p.name()), p.body()}),
                      AlphaExpr{target.env.extend(t.name()), t.body()}, s);
  }
  return false;
}

void canon_walk(const Expr& e, const std::set<VarName>& pvars, std::vector<const VarName*>& shadow, PatKeys& out) {
  switch (e.kind()) {
    case ExprKind::Var: {
      for (const VarName* b : shadow) {
        if (*b == e.name()) return;
      }
      if (pvars.count(e.name()) && !out.count(e.name())) {
        out.emplace(e.name(), static_cast<PatKey>(out.size() + 1));
      }
      return;
    }
    case ExprKind::App:
      canon_walk(e.fun(), pvars, shadow, out);
      canon_walk(e.arg(), pvars, shadow, out);
      return;
    case ExprKind::Lam:
      shadow.push_back(&e.name());
      canon_walk(e.body(), pvars, shadow, out);
      shadow.pop_back();
      return;
  }
}

// Pattern variable occurrences classify as keys, the rest as in alpha_eq.
struct PatVarClass {
  enum Kind { Bound, PatVar, Free } kind;
  DBNum number = 0;
  const VarName* name = nullptr;

  bool operator==(const PatVarClass& o) const {
    if (kind != o.kind) return false;
    if (kind == Free) return *name == *o.name;
    return number == o.number;
  }
};

PatVarClass classify(const PatExpr& p, const VarName& v) {
  if (auto level = p.body().env.lookup(v)) return {PatVarClass::Bound, *level, nullptr};
  auto it = p.keys().find(v);
  if (it != p.keys().end()) return {PatVarClass::PatVar, it->second, nullptr};
  return {PatVarClass::Free, 0, &v};
}

bool pattern_equal_in(const PatExpr& a, const PatExpr& b) {
  const Expr& x = a.body().expr;
  const Expr& y = b.body().expr;
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case ExprKind::Var:
      return classify(a, x.name()) == classify(b, y.name());
    case ExprKind::App:
      return pattern_equal_in(a.with_body(AlphaExpr{a.body().env, x.fun()}),
                              b.with_body(AlphaExpr{b.body().env, y.fun()})) &&
             pattern_equal_in(a.with_body(AlphaExpr{a.body().env, x.arg()}),
                              b.with_body(AlphaExpr{b.body().env, y.arg()}));
    case ExprKind::Lam:
      return pattern_equal_in(a.with_body(AlphaExpr{a.body().env.extend(x.name()), x.body()}),
                              b.with_body(AlphaExpr{b.body().env.extend(y.name()), y.body()}));
  }
  return false;
}

void collect_free(const Expr& e, std::vector<const VarName*>& bound, std::set<VarName>& out) {
  switch (e.kind()) {
    case ExprKind::Var:
      for (const VarName* b : bound) {
        if (*b == e.name()) return;
      }
      out.insert(e.name());
      return;
    case ExprKind::App:
      collect_free(e.fun(), bound, out);
      collect_free(e.arg(), bound, out);
      return;
    case ExprKind::Lam:
      bound.push_back(&e.name());
      collect_free(e.body(), bound, out);
      bound.pop_back();
      return;
  }
}

void collect_names(const Expr& e, std::set<VarName>& out) {
  if (e.is_app()) {
    collect_names(e.fun(), out);
    collect_names(e.arg(), out);
    return;
  }
  out.insert(e.name());
  if (e.is_lam()) collect_names(e.body(), out);
}

struct Instantiator {
  const PatKeys& keys;
  const Subst& subst;
  std::set<VarName> clash;  // free in some binding
  std::set<VarName> taken;  // every name in sight, plus generated ones
  std::size_t fresh = 0;

  // scope: pattern binder name -> name used in the output
  Expr go(const Expr& e, std::vector<std::pair<const VarName*, VarName>>& scope) {
    switch (e.kind()) {
      case ExprKind::Var: {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
          if (*it->first == e.name()) return Expr::var(it->second);
        }
        auto k = keys.find(e.name());
        if (k != keys.end()) {
          auto b = subst.find(k->second);
          if (b != subst.end()) return b->second;
        }
        return e;
      }
      case ExprKind::App:
        return Expr::app(go(e.fun(), scope), go(e.arg(), scope));
      case ExprKind::Lam: {
        VarName name = e.name();
        if (clash.count(name)) {
          do {
            name = VarName(e.name().str() + "_" + std::to_string(fresh++));
          } while (taken.count(name));
          taken.insert(name);
        }
        scope.emplace_back(&e.name(), name);
        Expr body = go(e.body(), scope);
        scope.pop_back();
        return Expr::lam(std::move(name), std::move(body));
      }
    }
    return e;
  }
};

}  // namespace

MatchComputation<Unit> refine_match(std::function<std::optional<Subst>(const Subst&)> refine) {
  return MatchComputation<Unit>([refine = std::move(refine)](const Subst& s) {
    MatchComputation<Unit>::Results out;
    if (auto next = refine(s)) out.emplace_back(Unit{}, std::move(*next));
    return out;
  });
}

PatKeys canon_pat_keys(const std::vector<VarName>& pvars, const Expr& e) {
  std::set<VarName> vars(pvars.begin(), pvars.end());
  if (vars.size() != pvars.size()) throw std::invalid_argument("duplicate pattern variable");
  PatKeys out;
  std::vector<const VarName*> shadow;
  canon_walk(e, vars, shadow, out);
  return out;
}

std::optional<PatKey> PatExpr::pat_key(const VarName& v) const {
  if (body_.env.lookup(v)) return std::nullopt;
  auto it = keys_->find(v);
  if (it == keys_->end()) return std::nullopt;
  return it->second;
}

bool pattern_equal(const PatExpr& a, const PatExpr& b) { return pattern_equal_in(a, b); }

MatchComputation<Unit> match_pat_var(PatKey pk, const AlphaExpr& target) {
  return refine_match([pk, target](const Subst& s) -> std::optional<Subst> {
    Subst next = s;
    if (!bind_pat_var(pk, target.env, target.expr, next)) return std::nullopt;
    return next;
  });
}

MatchComputation<Unit> match_expr(const PatExpr& pat, const AlphaExpr& target) {
  return refine_match([pat, target](const Subst& s) -> std::optional<Subst> {
    Subst next = s;
    if (!match_in(pat, target, next)) return std::nullopt;
    return next;
  });
}

Expr instantiate(const PatExpr& pat, const Subst& subst) {
  Instantiator inst{pat.keys(), subst, {}, {}, 0};
  std::vector<const VarName*> bound;
  for (const auto& [k, e] : subst) collect_free(e, bound, inst.clash);
  inst.taken = inst.clash;
  collect_names(pat.body().expr, inst.taken);
  std::vector<std::pair<const VarName*, VarName>> scope;
  return inst.go(pat.body().expr, scope);
}

}  // namespace triemap
