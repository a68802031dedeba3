#pragma once

// Naive reference implementations. They favour obviousness over speed and
// serve as ground truth for the differential tests.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "triemap/expr.hpp"
#include "triemap/triemap.hpp"

namespace triemap::oracle {

// Association list, most recent entry first, at most one entry per alpha class.
template <class V>
class AssocMap {
 public:
  const V* lookup(const AlphaExpr& k) const {
    for (const auto& [key, v] : entries_) {
      if (alpha_eq(key, k)) return &v;
    }
    return nullptr;
  }

  AssocMap alter(const AlphaExpr& k, const TF<V>& tf) const {
    const V* cur = lookup(k);
    std::optional<V> next = tf(cur ? std::optional<V>(*cur) : std::nullopt);
    AssocMap out;
    if (next) out.entries_.emplace_back(k, std::move(*next));
    for (const auto& e : entries_) {
      if (!alpha_eq(e.first, k)) out.entries_.push_back(e);
    }
    return out;
  }

  AssocMap insert(const AlphaExpr& k, V v) const { return alter(k, const_tf<V>(std::move(v))); }
  AssocMap erase(const AlphaExpr& k) const { return alter(k, const_tf<V>(std::nullopt)); }

  // f(left value, right value) where both sides hold the key.
  template <class F>
  AssocMap union_with(F&& f, const AssocMap& right) const {
    AssocMap out = right;
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
      const V* r = right.lookup(it->first);
      out = out.insert(it->first, r ? f(it->second, *r) : it->second);
    }
    return out;
  }

  std::size_t size() const { return entries_.size(); }
  const std::vector<std::pair<AlphaExpr, V>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<AlphaExpr, V>> entries_;
};

template <class V>
const V* oracle_lookup(const AlphaExpr& k, const AssocMap<V>& m) {
  return m.lookup(k);
}

template <class V>
AssocMap<V> oracle_alter(const AlphaExpr& k, const TF<V>& tf, const AssocMap<V>& m) {
  return m.alter(k, tf);
}

using Binding = std::map<VarName, Expr>;
using NamedBindings = std::vector<std::pair<VarName, Expr>>;

// Alpha-equivalence by renaming binders to their depth and comparing text.
bool alpha_equivalent(const Expr& a, const Expr& b);

// Canonical text of a pattern: binders renamed by depth, pattern variables by
// first occurrence. Two patterns with equal text are the same rule.
std::string canonical_pattern(const std::vector<VarName>& vars, const Expr& body);

// The substitution S over the occurring pattern variables with S(pattern)
// alpha-equal to target, if there is one.
std::optional<Binding> oracle_match_one(const std::vector<VarName>& vars, const Expr& pattern, const Expr& target);

// Orders (bindings, value) results for set comparison.
template <class V>
bool result_less(const std::pair<NamedBindings, V>& a, const std::pair<NamedBindings, V>& b) {
  auto key = [](const std::pair<NamedBindings, V>& r) {
    std::vector<std::pair<std::string, std::string>> k;
    for (const auto& [n, e] : r.first) k.emplace_back(n.str(), print_expr(e));
    return k;
  };
  auto ka = key(a), kb = key(b);
  if (ka != kb) return ka < kb;
  return a.second < b.second;
}

// The linear baseline: every rule checked one at a time.
template <class V>
class NaivePatStore {
 public:
  struct Entry {
    std::vector<VarName> vars;
    Expr body;
    V value;
  };

  // Replaces a rule with the same canonical form.
  void insert(std::vector<VarName> vars, Expr body, V value) {
    std::string canon = canonical_pattern(vars, body);
    std::erase_if(entries_, [&](const Entry& e) { return canonical_pattern(e.vars, e.body) == canon; });
    entries_.push_back(Entry{std::move(vars), std::move(body), std::move(value)});
  }

  void erase(const std::vector<VarName>& vars, const Expr& body) {
    std::string canon = canonical_pattern(vars, body);
    std::erase_if(entries_, [&](const Entry& e) { return canonical_pattern(e.vars, e.body) == canon; });
  }

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// All (bindings, value) pairs for rules matching target, sorted.
template <class V>
std::vector<std::pair<NamedBindings, V>> oracle_match_all(const NaivePatStore<V>& store, const Expr& target) {
  std::vector<std::pair<NamedBindings, V>> out;
  for (const auto& e : store.entries()) {
    if (auto b = oracle_match_one(e.vars, e.body, target)) {
      out.emplace_back(NamedBindings(b->begin(), b->end()), e.value);
    }
  }
  std::sort(out.begin(), out.end(), result_less<V>);
  return out;
}

}  // namespace triemap::oracle
