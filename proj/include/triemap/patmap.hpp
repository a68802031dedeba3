#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "triemap/exprmap.hpp"
#include "triemap/matching.hpp"
#include "triemap/triemap.hpp"

namespace triemap {

// Singleton-or-empty wrapper for matching tries. A singleton holds a whole
// pattern; lookup matches the target against it.
template <class Value, class Inner>
class MSEMap {
 public:
  using mapped_type = Value;
  using inner_type = Inner;

  MSEMap() = default;

  SEShape shape() const { return static_cast<SEShape>(rep_.index()); }
  bool is_empty_node() const { return shape() == SEShape::Empty; }

  const PatExpr& single_pattern() const { return std::get<1>(rep_)->pat; }
  const Value& single_value() const { return std::get<1>(rep_)->value; }
  const Inner& multi() const { return *std::get<2>(rep_); }

  MatchComputation<const Value*> lookup(const AlphaExpr& target) const {
    switch (shape()) {
      case SEShape::Empty:
        return MatchComputation<const Value*>::failure();
      case SEShape::Single: {
        const auto& s = *std::get<1>(rep_);
        return match_expr(s.pat, target).then(MatchComputation<const Value*>::pure(&s.value));
      }
      case SEShape::Multi:
        return multi().lookup(target);
    }
    return MatchComputation<const Value*>::failure();
  }

  MSEMap alter(const PatExpr& pat, const TF<Value>& tf) const {
    switch (shape()) {
      case SEShape::Empty: {
        auto v = tf(std::nullopt);
        if (!v) return MSEMap{};
        return single(pat, std::move(*v));
      }
      case SEShape::Single: {
        const auto& s = *std::get<1>(rep_);
        if (pat == s.pat) {
          auto v = tf(s.value);
          if (!v) return MSEMap{};
          return single(s.pat, std::move(*v));
        }
        auto v = tf(std::nullopt);
        if (!v) return *this;
        Inner both = Inner{}.alter(s.pat, const_tf<Value>(s.value)).alter(pat, const_tf<Value>(std::move(*v)));
        return multi(std::move(both));
      }
      case SEShape::Multi:
        return multi(multi().alter(pat, tf));
    }
    return *this;
  }

  template <class R, class F>
  R foldr(F&& f, R z) const {
    switch (shape()) {
      case SEShape::Empty:
        return z;
      case SEShape::Single:
        return f(single_value(), std::move(z));
      case SEShape::Multi:
        return multi().foldr(f, std::move(z));
    }
    return z;
  }

  static MSEMap single(PatExpr pat, Value v) {
    MSEMap m;
    m.rep_ = std::make_shared<const SingleEntry>(SingleEntry{std::move(pat), std::move(v)});
    return m;
  }
  static MSEMap multi(Inner inner) {
    MSEMap m;
    m.rep_ = std::make_shared<const Inner>(std::move(inner));
    return m;
  }

 private:
  struct SingleEntry {
    PatExpr pat;
    Value value;
  };
  std::variant<std::monostate, std::shared_ptr<const SingleEntry>, std::shared_ptr<const Inner>> rep_;
};

template <class V>
class MExprNode;
template <class V>
struct MSlot;
template <class V>
using MExprTrie = MSEMap<MSlot<V>, MExprNode<V>>;

// Value or nested trie, as for ExprMap.
template <class V>
struct MSlot {
  using value_type = V;
  std::variant<V, MExprTrie<V>> content;

  bool holds_value() const { return content.index() == 0; }
  const V& value() const { return std::get<0>(content); }
  const MExprTrie<V>& trie() const { return std::get<1>(content); }
};

template <class V>
class MExprNode {
 public:
  using Trie = MExprTrie<V>;
  using Slot = MSlot<V>;
  using Match = MatchComputation<const Slot*>;

  // Rigid results (descending the target's structure) come before flexi
  // results (entries whose pattern is a bare pattern variable), the latter in
  // ascending key order.
  Match lookup(const AlphaExpr& target) const {
    Match rigid = lookup_rigid(target);
    if (!pvar_) return rigid;
    std::vector<Match> flexi;
    flexi.reserve(pvar_->size() + 1);
    flexi.push_back(std::move(rigid));
    for (const auto& [pk, slot] : *pvar_) {
      flexi.push_back(match_pat_var(pk, target).then(Match::pure(&slot)));
    }
    return msum(std::move(flexi));
  }

  MExprNode alter(const PatExpr& pat, const TF<Slot>& tf) const {
    MExprNode out = *this;
    const AlphaExpr& body = pat.body();
    const Expr& e = body.expr;
    switch (e.kind()) {
      case ExprKind::Var:
        if (auto level = body.env.lookup(e.name())) {
          out.bvar_ = detail::leaf_alter(bvar_, *level, tf);
        } else if (auto pk = pat.keys().find(e.name()); pk != pat.keys().end()) {
          out.pvar_ = detail::leaf_alter(pvar_, pk->second, tf);
        } else {
          out.fvar_ = detail::leaf_alter(fvar_, e.name(), tf);
        }
        break;
      case ExprKind::App: {
        PatExpr arg = pat.with_body(AlphaExpr{body.env, e.arg()});
        TF<Slot> lifted = [&arg, &tf](std::optional<Slot> inner) -> std::optional<Slot> {
          Trie m = inner ? inner->trie() : Trie{};
          return Slot{m.alter(arg, tf)};
        };
        out.app_ = app_.alter(pat.with_body(AlphaExpr{body.env, e.fun()}), lifted);
        break;
      }
      case ExprKind::Lam:
        out.lam_ = lam_.alter(pat.with_body(AlphaExpr{body.env.extend(e.name()), e.body()}), tf);
        break;
    }
    return out;
  }

  // Field order: fvar, bvar, pvar, app, lam.
  template <class R, class F>
  R foldr(F&& f, R z) const {
    z = lam_.foldr(f, std::move(z));
    z = app_.foldr(f, std::move(z));
    z = detail::leaf_foldr(pvar_, f, std::move(z));
    z = detail::leaf_foldr(bvar_, f, std::move(z));
    return detail::leaf_foldr(fvar_, f, std::move(z));
  }

  const std::map<VarName, Slot>* fvar() const { return fvar_.get(); }
  const std::map<DBNum, Slot>* bvar() const { return bvar_.get(); }
  const std::map<PatKey, Slot>* pvar() const { return pvar_.get(); }
  const Trie& app() const { return app_; }
  const Trie& lam() const { return lam_; }

 private:
  Match lookup_rigid(const AlphaExpr& target) const {
    const Expr& e = target.expr;
    switch (e.kind()) {
      case ExprKind::Var: {
        const Slot* hit = nullptr;
        if (auto level = target.env.lookup(e.name())) {
          hit = detail::leaf_lookup(bvar_, *level);
        } else {
          hit = detail::leaf_lookup(fvar_, e.name());
        }
        return lift_optional(hit ? std::optional<const Slot*>(hit) : std::nullopt);
      }
      case ExprKind::App: {
        if (app_.is_empty_node()) return Match::failure();
        AlphaExpr arg{target.env, e.arg()};
        return app_.lookup(AlphaExpr{target.env, e.fun()}).bind([arg](const Slot* inner) {
          return inner->trie().lookup(arg);
        });
      }
      case ExprKind::Lam:
        if (lam_.is_empty_node()) return Match::failure();
        return lam_.lookup(AlphaExpr{target.env.extend(e.name()), e.body()});
    }
    return Match::failure();
  }

  detail::LeafMap<VarName, Slot> fvar_;
  detail::LeafMap<DBNum, Slot> bvar_;
  detail::LeafMap<PatKey, Slot> pvar_;
  Trie app_;
  Trie lam_;
};

namespace detail {

template <class V, class F>
struct MSlotFolder {
  F& f;
  template <class R>
  R operator()(const MSlot<V>& s, R z) const {
    if (s.holds_value()) return f(s.value(), std::move(z));
    return s.trie().foldr(*this, std::move(z));
  }
};

}  // namespace detail

// A matching lookup result: the binding of each pattern variable, sorted by name.
using PatSubst = std::vector<std::pair<VarName, Expr>>;

// Matching triemap keyed by patterns (quantified variables plus body). Each
// value is stored with the numbering of its pattern's variables so lookups
// can report bindings under the names the client used.
template <class V>
class PatMap {
 public:
  using Stored = std::pair<PatKeys, V>;

  PatMap() = default;

  PatMap alter(const std::vector<VarName>& pvars, const Expr& body, const TF<V>& tf) const {
    PatExpr pat = PatExpr::closed(pvars, body);
    const PatKeys& pks = pat.keys();
    TF<MSlot<Stored>> ptf = [&](std::optional<MSlot<Stored>> old) -> std::optional<MSlot<Stored>> {
      std::optional<V> v = tf(old ? std::optional<V>(old->value().second) : std::nullopt);
      if (!v) return std::nullopt;
      return MSlot<Stored>{Stored{pks, std::move(*v)}};
    };
    return PatMap(trie_.alter(pat, ptf));
  }

  PatMap insert(const std::vector<VarName>& pvars, const Expr& body, V v) const {
    return alter(pvars, body, const_tf<V>(std::move(v)));
  }
  PatMap erase(const std::vector<VarName>& pvars, const Expr& body) const {
    return alter(pvars, body, const_tf<V>(std::nullopt));
  }

  // Every stored pattern matching target, with its bindings. Pattern
  // variables that did not occur in the pattern are absent.
  std::vector<std::pair<PatSubst, V>> lookup(const Expr& target) const {
    std::vector<std::pair<PatSubst, V>> out;
    for (const auto& [subst, slot] : run_match(trie_.lookup(AlphaExpr::closed(target)))) {
      const auto& [pks, v] = slot->value();
      PatSubst bindings;
      for (const auto& [name, key] : pks) {
        auto it = subst.find(key);
        if (it != subst.end()) bindings.emplace_back(name, it->second);
      }
      out.emplace_back(std::move(bindings), v);
    }
    return out;
  }

  template <class R, class F>
  R foldr(F&& f, R z) const {
    auto unwrap = [&](const Stored& s, R acc) { return f(s.second, std::move(acc)); };
    return trie_.foldr(detail::MSlotFolder<Stored, decltype(unwrap)>{unwrap}, std::move(z));
  }

  std::size_t size() const {
    return foldr([](const V&, std::size_t n) { return n + 1; }, std::size_t{0});
  }

  const MExprTrie<Stored>& trie() const { return trie_; }

 private:
  explicit PatMap(MExprTrie<Stored> trie) : trie_(std::move(trie)) {}
  MExprTrie<Stored> trie_;
};

template <class V>
PatMap<V> alter_pm(const std::vector<VarName>& pvars, const Expr& body, const TF<V>& tf, const PatMap<V>& m) {
  return m.alter(pvars, body, tf);
}

template <class V>
std::vector<std::pair<PatSubst, V>> lookup_pm(const Expr& target, const PatMap<V>& m) {
  return m.lookup(target);
}

// Same counting rules as the ExprMap census, with pattern bodies as keys.
template <class V>
std::size_t node_census(const MExprTrie<V>& t) {
  auto slot_census = [](const MSlot<V>& s) -> std::size_t { return s.holds_value() ? 0 : node_census(s.trie()); };
  switch (t.shape()) {
    case SEShape::Empty:
      return 1;
    case SEShape::Single:
      return 1 + t.single_pattern().body().expr.size() + slot_census(t.single_value());
    case SEShape::Multi:
      break;
  }
  const MExprNode<V>& n = t.multi();
  std::size_t total = 1;
  auto leaves = [&](const auto* m) {
    if (!m) return;
    for (const auto& [k, s] : *m) total += 1 + slot_census(s);
  };
  leaves(n.fvar());
  leaves(n.bvar());
  leaves(n.pvar());
  if (!n.app().is_empty_node()) total += node_census(n.app());
  if (!n.lam().is_empty_node()) total += node_census(n.lam());
  return total;
}

template <class V>
std::size_t node_census(const PatMap<V>& m) {
  return node_census(m.trie());
}

}  // namespace triemap
