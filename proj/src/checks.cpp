#include "triemap/checks.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "triemap/exprmap.hpp"
#include "triemap/matching.hpp"
#include "triemap/oracle.hpp"
#include "triemap/patmap.hpp"
#include "triemap/triemap.hpp"

namespace triemap::checks {

namespace {

const std::vector<VarName>& names(std::initializer_list<const char*> list, std::vector<VarName>& storage) {
  if (storage.empty()) {
    for (const char* n : list) storage.emplace_back(n);
  }
  return storage;
}

const std::vector<VarName>& key_leaves() {
  static std::vector<VarName> v;
  return names({"x", "y", "z", "f", "g", "a"}, v);
}
const std::vector<VarName>& key_binders() {
  static std::vector<VarName> v;
  return names({"x", "y", "z"}, v);
}
const std::vector<VarName>& pattern_var_pool() {
  static std::vector<VarName> v;
  return names({"p", "q", "r"}, v);
}
const std::vector<VarName>& pattern_constants() {
  static std::vector<VarName> v;
  return names({"f", "g", "a"}, v);
}
const std::vector<VarName>& pattern_binders() {
  static std::vector<VarName> v;
  return names({"x", "y"}, v);
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[rng.below(xs.size())];
}

Expr gen_key(Rng& rng, std::size_t size, std::vector<VarName>& bound) {
  if (size == 1) {
    if (!bound.empty() && rng.below(2) == 0) return Expr::var(pick(rng, bound));
    return Expr::var(pick(rng, key_leaves()));
  }
  if (size >= 3 && rng.below(3) < 2) {
    std::size_t left = rng.between(1, size - 2);
    Expr f = gen_key(rng, left, bound);
    Expr a = gen_key(rng, size - 1 - left, bound);
    return Expr::app(std::move(f), std::move(a));
  }
  VarName b = pick(rng, key_binders());
  bound.push_back(b);
  Expr body = gen_key(rng, size - 1, bound);
  bound.pop_back();
  return Expr::lam(std::move(b), std::move(body));
}

Expr gen_pattern_body(Rng& rng, std::size_t size, const std::vector<VarName>& vars, std::vector<VarName>& bound) {
  if (size == 1) {
    std::uint64_t roll = rng.below(20);
    if (!vars.empty() && roll < 9) return Expr::var(pick(rng, vars));
    if (!bound.empty() && roll < 13) return Expr::var(pick(rng, bound));
    return Expr::var(pick(rng, pattern_constants()));
  }
  if (size >= 3 && rng.below(3) < 2) {
    std::size_t left = rng.between(1, size - 2);
    Expr f = gen_pattern_body(rng, left, vars, bound);
    Expr a = gen_pattern_body(rng, size - 1 - left, vars, bound);
    return Expr::app(std::move(f), std::move(a));
  }
  // Now and then a lambda shadows a pattern variable.
  VarName b = (!vars.empty() && rng.below(8) == 0) ? pick(rng, vars) : pick(rng, pattern_binders());
  bound.push_back(b);
  Expr body = gen_pattern_body(rng, size - 1, vars, bound);
  bound.pop_back();
  return Expr::lam(std::move(b), std::move(body));
}

Expr rename_in(const Expr& e, std::map<VarName, VarName>& scope, std::size_t& counter) {
  switch (e.kind()) {
    case ExprKind::Var: {
      auto it = scope.find(e.name());
      return it == scope.end() ? e : Expr::var(it->second);
    }
    case ExprKind::App:
      return Expr::app(rename_in(e.fun(), scope, counter), rename_in(e.arg(), scope, counter));
    case ExprKind::Lam: {
      VarName fresh("w" + std::to_string(counter++));
      auto saved = scope.find(e.name()) == scope.end() ? std::nullopt : std::optional<VarName>(scope.at(e.name()));
      scope.insert_or_assign(e.name(), fresh);
      Expr body = rename_in(e.body(), scope, counter);
      if (saved) {
        scope.insert_or_assign(e.name(), *saved);
      } else {
        scope.erase(e.name());
      }
      return Expr::lam(fresh, std::move(body));
    }
  }
  return e;
}

// Textual substitution that ignores capture: the resulting target may well
// mention variables the pattern's lambdas bind, which matching must reject.
Expr substitute_naive(const Expr& e, const std::map<VarName, Expr>& s, std::vector<VarName>& bound) {
  switch (e.kind()) {
    case ExprKind::Var: {
      if (std::find(bound.begin(), bound.end(), e.name()) != bound.end()) return e;
      auto it = s.find(e.name());
      return it == s.end() ? e : it->second;
    }
    case ExprKind::App:
      return Expr::app(substitute_naive(e.fun(), s, bound), substitute_naive(e.arg(), s, bound));
    case ExprKind::Lam: {
      bound.push_back(e.name());
      Expr body = substitute_naive(e.body(), s, bound);
      bound.pop_back();
      return Expr::lam(e.name(), std::move(body));
    }
  }
  return e;
}

std::string show(const int* v) { return v ? std::to_string(*v) : "none"; }
std::string show(const std::optional<int>& v) { return v ? std::to_string(*v) : "none"; }

std::optional<int> opt(const int* v) { return v ? std::optional<int>(*v) : std::nullopt; }

struct NamedTF {
  std::string name;
  TF<int> tf;
};

NamedTF random_tf(Rng& rng) {
  switch (rng.below(3)) {
    case 0: {
      int v = static_cast<int>(rng.below(1000));
      return {"const " + std::to_string(v), const_tf<int>(v)};
    }
    case 1:
      return {"const none", const_tf<int>(std::nullopt)};
    default:
      return {"increment-if-present", [](std::optional<int> v) -> std::optional<int> {
                if (!v) return std::nullopt;
                return *v + 1;
              }};
  }
}

std::string key_text(const std::vector<AlphaExpr>& ks) {
  std::string out = "[";
  for (std::size_t i = 0; i < ks.size(); ++i) out += (i ? ", " : "") + print_expr(ks[i].expr);
  return out + "]";
}

template <class K, class M>
std::optional<std::string> check_laws(const char* what, const M& m, const K& k1, const K& k2, const NamedTF& tf,
                                      const std::string& k1_text, const std::string& k2_text) {
  std::ostringstream msg;
  if (M{}.lookup(k1) != nullptr) {
    msg << what << " law 1: lookup " << k1_text << " in the empty map found a value";
    return msg.str();
  }
  M altered = m.alter(k1, tf.tf);
  std::optional<int> want = tf.tf(opt(m.lookup(k1)));
  if (opt(altered.lookup(k1)) != want) {
    msg << what << " law 2: key " << k1_text << ", transformer " << tf.name << ": expected " << show(want)
        << ", got " << show(altered.lookup(k1));
    return msg.str();
  }
  if (opt(altered.lookup(k2)) != opt(m.lookup(k2))) {
    msg << what << " law 3: altering " << k1_text << " with " << tf.name << " changed " << k2_text << " from "
        << show(m.lookup(k2)) << " to " << show(altered.lookup(k2));
    return msg.str();
  }
  return std::nullopt;
}

}  // namespace

Expr random_key(Rng& rng, std::size_t max_size) {
  std::vector<VarName> bound;
  return gen_key(rng, rng.between(1, max_size), bound);
}

Expr rename_binders(const Expr& e, Rng& rng) {
  std::map<VarName, VarName> scope;
  std::size_t counter = rng.below(1000);
  return rename_in(e, scope, counter);
}

RandomPattern random_pattern(Rng& rng, std::size_t max_size) {
  std::vector<VarName> pool = pattern_var_pool();
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
  pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(rng.below(4)), pool.end());
  std::vector<VarName> bound;
  Expr body = gen_pattern_body(rng, rng.between(1, max_size), pool, bound);
  return RandomPattern{std::move(pool), std::move(body)};
}

Expr random_target(Rng& rng, const std::vector<RandomPattern>& patterns) {
  if (patterns.empty() || rng.below(4) == 0) return random_key(rng, 12);
  const RandomPattern& p = pick(rng, patterns);
  if (rng.below(2) == 0) {
    std::map<VarName, Expr> s;
    for (const auto& v : p.vars) s.emplace(v, random_key(rng, 4));
    std::vector<VarName> bound;
    return substitute_naive(p.body, s, bound);
  }
  PatExpr pat = PatExpr::closed(p.vars, p.body);
  Subst s;
  for (const auto& [name, key] : pat.keys()) s.emplace(key, random_key(rng, 4));
  return instantiate(pat, s);
}

std::optional<std::string> law_trial(Rng& rng) {
  // ExprMap, with the shape of the underlying SEMap chosen at random.
  {
    ExprMap<int> m;
    std::vector<Expr> inserted;
    std::size_t n = rng.below(3) == 0 ? rng.below(2) : rng.between(2, 10);
    for (std::size_t i = 0; i < n; ++i) {
      inserted.push_back(random_key(rng, 8));
      m = m.insert_closed(inserted.back(), static_cast<int>(rng.below(1000)));
    }
    Expr k1 = (!inserted.empty() && rng.below(2) == 0) ? rename_binders(pick(rng, inserted), rng) : random_key(rng, 8);
    Expr k2 = random_key(rng, 8);
    for (int tries = 0; alpha_eq(AlphaExpr::closed(k1), AlphaExpr::closed(k2)) && tries < 100; ++tries) {
      k2 = random_key(rng, 8);
    }
    if (!alpha_eq(AlphaExpr::closed(k1), AlphaExpr::closed(k2))) {
      if (auto bad = check_laws("ExprMap", m, AlphaExpr::closed(k1), AlphaExpr::closed(k2), random_tf(rng),
                                print_expr(k1), print_expr(k2))) {
        return bad;
      }
    }
  }
  // ListMap over ExprMap.
  {
    using Keys = std::vector<AlphaExpr>;
    auto random_keys = [&] {
      Keys ks;
      std::size_t len = rng.below(4);
      for (std::size_t i = 0; i < len; ++i) ks.push_back(AlphaExpr::closed(random_key(rng, 4)));
      return ks;
    };
    ListMap<ExprMap, int> m;
    std::vector<Keys> inserted;
    std::size_t n = rng.below(8);
    for (std::size_t i = 0; i < n; ++i) {
      inserted.push_back(random_keys());
      m = m.alter(inserted.back(), const_tf<int>(static_cast<int>(rng.below(1000))));
    }
    Keys k1 = (!inserted.empty() && rng.below(2) == 0) ? pick(rng, inserted) : random_keys();
    Keys k2 = random_keys();
    if (!(k1 == k2)) {
      if (auto bad = check_laws("ListMap", m, k1, k2, random_tf(rng), key_text(k1), key_text(k2))) return bad;
    }
  }
  return std::nullopt;
}

std::optional<std::string> exprmap_sequence_trial(Rng& rng, std::size_t ops, std::size_t max_key_size) {
  std::vector<Expr> pool;
  for (int i = 0; i < 12; ++i) pool.push_back(random_key(rng, max_key_size));
  ExprMap<int> m;
  oracle::AssocMap<int> o;
  std::ostringstream log;
  for (std::size_t step = 0; step < ops; ++step) {
    Expr key = pick(rng, pool);
    if (rng.below(2) == 0) key = rename_binders(key, rng);
    AlphaExpr k = AlphaExpr::closed(key);
    std::uint64_t op = rng.below(4);
    if (op < 3) {
      NamedTF tf = op == 0 ? NamedTF{"insert", const_tf<int>(static_cast<int>(step))}
                   : op == 1 ? NamedTF{"delete", const_tf<int>(std::nullopt)}
                             : random_tf(rng);
      m = m.alter(k, tf.tf);
      o = oracle::oracle_alter(k, tf.tf, o);
      log << "  alter " << print_expr(key) << " (" << tf.name << ")\n";
    } else {
      log << "  lookup " << print_expr(key) << "\n";
    }
    const int* got = m.lookup(k);
    const int* want = oracle::oracle_lookup(k, o);
    if (opt(got) != opt(want)) {
      return "ExprMap disagrees with the association list after:\n" + log.str() + "  lookup " + print_expr(key) +
             ": expected " + show(want) + ", got " + show(got);
    }
  }
  if (m.size() != o.size()) {
    return "ExprMap size " + std::to_string(m.size()) + " but the association list holds " +
           std::to_string(o.size()) + " after:\n" + log.str();
  }
  for (const auto& [k, v] : o.entries()) {
    if (opt(m.lookup(k)) != std::optional<int>(v)) {
      return "ExprMap lost key " + print_expr(k.expr) + " after:\n" + log.str();
    }
  }
  return std::nullopt;
}

std::optional<std::string> renaming_trial(Rng& rng) {
  ExprMap<int> m;
  std::vector<Expr> keys;
  std::size_t n = rng.below(20);
  for (std::size_t i = 0; i < n; ++i) {
    keys.push_back(random_key(rng, 12));
    m = m.insert_closed(keys.back(), static_cast<int>(i));
  }
  Expr k = (!keys.empty() && rng.below(4) != 0) ? pick(rng, keys) : random_key(rng, 12);
  Expr renamed = rename_binders(k, rng);
  if (opt(m.lookup_closed(k)) != opt(m.lookup_closed(renamed))) {
    return "lookup " + print_expr(k) + " gives " + show(m.lookup_closed(k)) + " but its renaming " +
           print_expr(renamed) + " gives " + show(m.lookup_closed(renamed));
  }
  return std::nullopt;
}

std::optional<std::string> match_trial(Rng& rng, std::size_t n_patterns, std::size_t n_targets) {
  PatMap<int> pm;
  oracle::NaivePatStore<int> store;
  std::vector<RandomPattern> patterns;
  for (std::size_t i = 0; i < n_patterns; ++i) {
    patterns.push_back(random_pattern(rng, 12));
    pm = pm.insert(patterns.back().vars, patterns.back().body, static_cast<int>(i));
    store.insert(patterns.back().vars, patterns.back().body, static_cast<int>(i));
  }
  for (std::size_t t = 0; t < n_targets; ++t) {
    Expr target = random_target(rng, patterns);
    std::vector<std::pair<oracle::NamedBindings, int>> got;
    for (auto& [subst, v] : pm.lookup(target)) got.emplace_back(oracle::NamedBindings(subst.begin(), subst.end()), v);
    std::sort(got.begin(), got.end(), oracle::result_less<int>);
    auto want = oracle::oracle_match_all(store, target);

    auto render = [&](const std::vector<std::pair<oracle::NamedBindings, int>>& rs) {
      std::string out;
      for (const auto& [b, v] : rs) {
        out += "    rule " + std::to_string(v) + " {";
        for (std::size_t i = 0; i < b.size(); ++i) {
          out += (i ? ", " : " ") + b[i].first.str() + "=" + print_expr(b[i].second);
        }
        out += " }\n";
      }
      return out.empty() ? "    (none)\n" : out;
    };
    if (render(got) != render(want)) {
      std::string rules;
      std::vector<int> involved;
      for (const auto& [b, v] : got) involved.push_back(v);
      for (const auto& [b, v] : want) involved.push_back(v);
      std::sort(involved.begin(), involved.end());
      involved.erase(std::unique(involved.begin(), involved.end()), involved.end());
      for (int v : involved) {
        const auto& p = patterns[static_cast<std::size_t>(v)];
        rules += "    rule " + std::to_string(v) + ":";
        for (const auto& var : p.vars) rules += " " + var.str();
        rules += " ; " + print_expr(p.body) + "\n";
      }
      return "PatMap disagrees with the naive matcher on target " + print_expr(target) + "\n  rules:\n" + rules +
             "  expected:\n" + render(want) + "  got:\n" + render(got);
    }
  }
  return std::nullopt;
}

}  // namespace triemap::checks
