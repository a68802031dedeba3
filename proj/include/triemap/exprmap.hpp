#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "triemap/expr.hpp"
#include "triemap/triemap.hpp"

namespace triemap {

// The App field of an expression trie is a trie of tries, and that one's App
// field a trie of tries of tries, and so on. Rather than a new type per nesting
// depth, every value position holds a Slot: a user value at the outermost
// level, a nested trie below an App. The nesting depth decides which one a
// given slot holds.
template <class V>
class ExprNode;
template <class V>
struct Slot;
template <class V>
using ExprTrie = SEMap<AlphaExpr, Slot<V>, ExprNode<V>>;

template <class V>
struct Slot {
  using value_type = V;
  std::variant<V, ExprTrie<V>> content;

  bool holds_value() const { return content.index() == 0; }
  const V& value() const { return std::get<0>(content); }
  const ExprTrie<V>& trie() const { return std::get<1>(content); }
};

namespace detail {

template <class K, class S>
using LeafMap = std::shared_ptr<const std::map<K, S>>;

template <class K, class S>
const S* leaf_lookup(const LeafMap<K, S>& m, const K& k) {
  if (!m) return nullptr;
  auto it = m->find(k);
  return it == m->end() ? nullptr : &it->second;
}

template <class K, class S>
LeafMap<K, S> leaf_alter(const LeafMap<K, S>& m, const K& k, const TF<S>& tf) {
  const S* cur = leaf_lookup(m, k);
  std::optional<S> next = tf(cur ? std::optional<S>(*cur) : std::nullopt);
  if (!next && !cur) return m;
  auto out = m ? std::make_shared<std::map<K, S>>(*m) : std::make_shared<std::map<K, S>>();
  if (next) {
    (*out)[k] = std::move(*next);
  } else {
    out->erase(k);
  }
  if (out->empty()) return nullptr;
  return out;
}

template <class K, class S, class R, class F>
R leaf_foldr(const LeafMap<K, S>& m, F& f, R z) {
  if (!m) return z;
  for (auto it = m->rbegin(); it != m->rend(); ++it) z = f(it->second, std::move(z));
  return z;
}

template <class K, class S, class F>
LeafMap<K, S> leaf_union(const LeafMap<K, S>& a, const LeafMap<K, S>& b, F& f) {
  if (!a) return b;
  if (!b) return a;
  auto out = std::make_shared<std::map<K, S>>(*a);
  for (const auto& [k, v] : *b) {
    auto it = out->find(k);
    if (it == out->end()) {
      out->emplace(k, v);
    } else {
      it->second = f(it->second, v);
    }
  }
  return out;
}

template <class K, class S, class G>
LeafMap<K, S> leaf_filter_map(const LeafMap<K, S>& m, G& g) {
  if (!m) return m;
  auto out = std::make_shared<std::map<K, S>>();
  for (const auto& [k, v] : *m) {
    if (auto r = g(v)) out->emplace(k, std::move(*r));
  }
  if (out->empty()) return nullptr;
  return out;
}

template <class K, class T, class S, class F>
LeafMap<K, T> leaf_map_values(const LeafMap<K, S>& m, F& f) {
  if (!m) return nullptr;
  auto out = std::make_shared<std::map<K, T>>();
  for (const auto& [k, v] : *m) out->emplace(k, f(v));
  return out;
}

}  // namespace detail

// One trie node: a field per Expr constructor, with variables split into
// free (by name) and lambda-bound (by De Bruijn level).
template <class V>
class ExprNode {
 public:
  using key_type = AlphaExpr;
  using mapped_type = Slot<V>;
  using Trie = ExprTrie<V>;

  template <class S>
  using rebind = ExprNode<typename S::value_type>;

  const Slot<V>* lookup(const AlphaExpr& k) const {
    const Expr& e = k.expr;
    switch (e.kind()) {
      case ExprKind::Var:
        if (auto level = k.env.lookup(e.name())) return detail::leaf_lookup(bvar_, *level);
        return detail::leaf_lookup(fvar_, e.name());
      case ExprKind::App: {
        const Slot<V>* inner = app_.lookup(AlphaExpr{k.env, e.fun()});
        if (!inner) return nullptr;
        return inner->trie().lookup(AlphaExpr{k.env, e.arg()});
      }
      case ExprKind::Lam:
        return lam_.lookup(AlphaExpr{k.env.extend(e.name()), e.body()});
    }
    return nullptr;
  }

  ExprNode alter(const AlphaExpr& k, const TF<Slot<V>>& tf) const {
    ExprNode out = *this;
    const Expr& e = k.expr;
    switch (e.kind()) {
      case ExprKind::Var:
        if (auto level = k.env.lookup(e.name())) {
          out.bvar_ = detail::leaf_alter(bvar_, *level, tf);
        } else {
          out.fvar_ = detail::leaf_alter(fvar_, e.name(), tf);
        }
        break;
      case ExprKind::App: {
        AlphaExpr arg{k.env, e.arg()};
        // An absent inner trie is altered as if empty; the result is kept
        // even when it ends up empty.
        TF<Slot<V>> lifted = [&arg, &tf](std::optional<Slot<V>> inner) -> std::optional<Slot<V>> {
          Trie m = inner ? inner->trie() : Trie{};
          return Slot<V>{m.alter(arg, tf)};
        };
        out.app_ = app_.alter(AlphaExpr{k.env, e.fun()}, lifted);
        break;
      }
      case ExprKind::Lam:
        out.lam_ = lam_.alter(AlphaExpr{k.env.extend(e.name()), e.body()}, tf);
        break;
    }
    return out;
  }

  // Visits fvar, bvar, app, lam in that order; leaf maps in ascending key order.
  template <class R, class F>
  R foldr(F&& f, R z) const {
    z = lam_.foldr(f, std::move(z));
    z = app_.foldr(f, std::move(z));
    z = detail::leaf_foldr(bvar_, f, std::move(z));
    return detail::leaf_foldr(fvar_, f, std::move(z));
  }

  template <class F>
  ExprNode union_with(F&& f, const ExprNode& right) const {
    ExprNode out;
    out.fvar_ = detail::leaf_union(fvar_, right.fvar_, f);
    out.bvar_ = detail::leaf_union(bvar_, right.bvar_, f);
    out.app_ = app_.union_with(f, right.app_);
    out.lam_ = lam_.union_with(f, right.lam_);
    return out;
  }

  template <class G>
  ExprNode filter_map(G&& g) const {
    ExprNode out;
    out.fvar_ = detail::leaf_filter_map(fvar_, g);
    out.bvar_ = detail::leaf_filter_map(bvar_, g);
    out.app_ = app_.filter_map(g);
    out.lam_ = lam_.filter_map(g);
    return out;
  }

  template <class S, class F>
  rebind<S> map_values(F&& f) const {
    rebind<S> out;
    out.fvar_ = detail::leaf_map_values<VarName, S>(fvar_, f);
    out.bvar_ = detail::leaf_map_values<DBNum, S>(bvar_, f);
    out.app_ = app_.template map_values<S>(f);
    out.lam_ = lam_.template map_values<S>(f);
    return out;
  }

  const std::map<VarName, Slot<V>>* fvar() const { return fvar_.get(); }
  const std::map<DBNum, Slot<V>>* bvar() const { return bvar_.get(); }
  const Trie& app() const { return app_; }
  const Trie& lam() const { return lam_; }

 private:
  template <class>
  friend class ExprNode;

  detail::LeafMap<VarName, Slot<V>> fvar_;
  detail::LeafMap<DBNum, Slot<V>> bvar_;
  Trie app_;
  Trie lam_;
};

namespace detail {

// Slot-level adaptors: apply a user function to values, recurse into tries.
template <class V, class F>
struct SlotFolder {
  F& f;
  template <class R>
  R operator()(const Slot<V>& s, R z) const {
    if (s.holds_value()) return f(s.value(), std::move(z));
    return s.trie().foldr(*this, std::move(z));
  }
};

template <class V, class F>
struct SlotCombiner {
  F& f;
  Slot<V> operator()(const Slot<V>& a, const Slot<V>& b) const {
    if (a.holds_value()) return Slot<V>{f(a.value(), b.value())};
    return Slot<V>{a.trie().union_with(*this, b.trie())};
  }
};

template <class V, class G>
struct SlotFilter {
  G& g;
  std::optional<Slot<V>> operator()(const Slot<V>& s) const {
    if (s.holds_value()) {
      std::optional<V> v = g(s.value());
      if (!v) return std::nullopt;
      return Slot<V>{std::move(*v)};
    }
    ExprTrie<V> t = s.trie().filter_map(*this);
    if (t.is_empty_node()) return std::nullopt;
    return Slot<V>{std::move(t)};
  }
};

template <class V, class W, class F>
struct SlotMapper {
  F& f;
  Slot<W> operator()(const Slot<V>& s) const {
    if (s.holds_value()) return Slot<W>{f(s.value())};
    return Slot<W>{s.trie().template map_values<Slot<W>>(*this)};
  }
};

}  // namespace detail

// Finite map keyed by expressions modulo alpha-renaming.
template <class V>
class ExprMap {
 public:
  using key_type = AlphaExpr;
  using mapped_type = V;

  ExprMap() = default;
  explicit ExprMap(ExprTrie<V> trie) : trie_(std::move(trie)) {}

  const V* lookup(const AlphaExpr& k) const {
    const Slot<V>* s = trie_.lookup(k);
    return s ? &s->value() : nullptr;
  }
  const V* lookup_closed(const Expr& e) const { return lookup(AlphaExpr::closed(e)); }

  ExprMap alter(const AlphaExpr& k, const TF<V>& tf) const {
    TF<Slot<V>> slot_tf = [&tf](std::optional<Slot<V>> s) -> std::optional<Slot<V>> {
      std::optional<V> v = tf(s ? std::optional<V>(s->value()) : std::nullopt);
      if (!v) return std::nullopt;
      return Slot<V>{std::move(*v)};
    };
    return ExprMap(trie_.alter(k, slot_tf));
  }

  ExprMap insert(const AlphaExpr& k, V v) const { return alter(k, const_tf<V>(std::move(v))); }
  ExprMap insert_closed(const Expr& e, V v) const { return insert(AlphaExpr::closed(e), std::move(v)); }
  ExprMap erase(const AlphaExpr& k) const { return alter(k, const_tf<V>(std::nullopt)); }

  // f(value, accumulator), right fold in the deterministic field order.
  template <class R, class F>
  R foldr(F&& f, R z) const {
    return trie_.foldr(detail::SlotFolder<V, F>{f}, std::move(z));
  }

  template <class F>
  ExprMap union_with(F&& f, const ExprMap& right) const {
    return ExprMap(trie_.union_with(detail::SlotCombiner<V, F>{f}, right.trie_));
  }

  template <class G>
  ExprMap filter_map(G&& g) const {
    return ExprMap(trie_.filter_map(detail::SlotFilter<V, G>{g}));
  }

  template <class P>
  ExprMap filter(P&& keep) const {
    return filter_map([&](const V& v) -> std::optional<V> {
      if (keep(v)) return v;
      return std::nullopt;
    });
  }

  template <class W, class F>
  ExprMap<W> map_values(F&& f) const {
    return ExprMap<W>(trie_.template map_values<Slot<W>>(detail::SlotMapper<V, W, F>{f}));
  }

  std::size_t size() const {
    return foldr([](const V&, std::size_t n) { return n + 1; }, std::size_t{0});
  }
  bool empty() const { return size() == 0; }

  std::vector<V> elems() const {
    std::vector<V> out = foldr(
        [](const V& v, std::vector<V> acc) {
          acc.push_back(v);
          return acc;
        },
        std::vector<V>{});
    return {out.rbegin(), out.rend()};
  }

  const ExprTrie<V>& trie() const { return trie_; }

 private:
  ExprTrie<V> trie_;
};

template <class V>
const V* lookup_closed_expr(const Expr& e, const ExprMap<V>& m) {
  return m.lookup_closed(e);
}

template <class V>
ExprMap<V> insert_closed_expr(const Expr& e, V v, const ExprMap<V>& m) {
  return m.insert_closed(e, std::move(v));
}

// Node count of the trie: one per trie node, one per leaf-map entry, and one
// per constructor of every key stored in a singleton. A standalone empty map
// counts 1; empty fields inside a node count 0.
template <class V>
std::size_t node_census(const ExprTrie<V>& t);

namespace detail {

template <class V>
std::size_t slot_census(const Slot<V>& s) {
  return s.holds_value() ? 0 : node_census(s.trie());
}

template <class V>
std::size_t field_census(const ExprTrie<V>& t) {
  return t.is_empty_node() ? 0 : node_census(t);
}

}  // namespace detail

template <class V>
std::size_t node_census(const ExprTrie<V>& t) {
  switch (t.shape()) {
    case SEShape::Empty:
      return 1;
    case SEShape::Single:
      return 1 + t.single_key().expr.size() + detail::slot_census(t.single_value());
    case SEShape::Multi:
      break;
  }
  const ExprNode<V>& n = t.multi();
  std::size_t total = 1;
  if (n.fvar()) {
    for (const auto& [k, s] : *n.fvar()) total += 1 + detail::slot_census(s);
  }
  if (n.bvar()) {
    for (const auto& [k, s] : *n.bvar()) total += 1 + detail::slot_census(s);
  }
  total += detail::field_census(n.app());
  total += detail::field_census(n.lam());
  return total;
}

template <class V>
std::size_t node_census(const ExprMap<V>& m) {
  return node_census(m.trie());
}

}  // namespace triemap
