#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace triemap {

// Value transformer: the one primitive from which insert and delete derive.
template <class V>
using TF = std::function<std::optional<V>(std::optional<V>)>;

template <class V>
TF<V> const_tf(std::optional<V> v) {
  return [v = std::move(v)](std::optional<V>) { return v; };
}

// Operations every triemap provides. Maps are persistent values: alter,
// union_with, filter and map_values return new maps and leave their inputs
// untouched.
template <class M>
concept TrieMap =
    std::equality_comparable<typename M::key_type> &&
    requires(const M m, const typename M::key_type& k, const TF<typename M::mapped_type>& tf,
             const std::function<typename M::mapped_type(const typename M::mapped_type&,
                                                         const typename M::mapped_type&)>& combine,
             const std::function<bool(const typename M::mapped_type&)>& keep) {
      { M{} };
      { m.lookup(k) } -> std::same_as<const typename M::mapped_type*>;
      { m.alter(k, tf) } -> std::same_as<M>;
      { m.union_with(combine, m) } -> std::same_as<M>;
      { m.filter(keep) } -> std::same_as<M>;
      { m.size() } -> std::convertible_to<std::size_t>;
    };

template <TrieMap M>
M insert_tm(const typename M::key_type& k, typename M::mapped_type v, const M& m) {
  return m.alter(k, const_tf<typename M::mapped_type>(std::move(v)));
}

template <TrieMap M>
M delete_tm(const typename M::key_type& k, const M& m) {
  return m.alter(k, const_tf<typename M::mapped_type>(std::nullopt));
}

namespace stats {
// Number of key comparisons made by SEMap singleton guards on this thread.
inline thread_local std::size_t single_key_checks = 0;
}  // namespace stats

enum class SEShape { Empty, Single, Multi };

// Singleton-or-empty wrapper around a triemap `Inner`. Inner must provide
// lookup/alter/foldr/union_with/filter_map over Key and Value; it only sees
// maps with two or more entries at creation. A Multi node is never shrunk
// back, so it may end up holding fewer live entries.
template <class Key, class Value, class Inner>
class SEMap {
 public:
  using key_type = Key;
  using mapped_type = Value;
  using inner_type = Inner;

  SEMap() = default;

  SEShape shape() const { return static_cast<SEShape>(rep_.index()); }
  bool is_empty_node() const { return shape() == SEShape::Empty; }

  const Key& single_key() const { return std::get<1>(rep_)->key; }
  const Value& single_value() const { return std::get<1>(rep_)->value; }
  const Inner& multi() const { return *std::get<2>(rep_); }

  const Value* lookup(const Key& k) const {
    switch (shape()) {
      case SEShape::Empty:
        return nullptr;
      case SEShape::Single: {
        const auto& s = *std::get<1>(rep_);
        ++stats::single_key_checks;
        return k == s.key ? &s.value : nullptr;
      }
      case SEShape::Multi:
        return multi().lookup(k);
    }
    return nullptr;
  }

  SEMap alter(const Key& k, const TF<Value>& tf) const {
    switch (shape()) {
      case SEShape::Empty: {
        auto v = tf(std::nullopt);
        if (!v) return SEMap{};
        return single(k, std::move(*v));
      }
      case SEShape::Single: {
        const auto& s = *std::get<1>(rep_);
        if (k == s.key) {
          auto v = tf(s.value);
          if (!v) return SEMap{};
          return single(s.key, std::move(*v));
        }
        auto v = tf(std::nullopt);
        if (!v) return *this;
        Inner both = Inner{}.alter(s.key, const_tf<Value>(s.value)).alter(k, const_tf<Value>(std::move(*v)));
        return multi(std::move(both));
      }
      case SEShape::Multi:
        return multi(multi().alter(k, tf));
    }
    return *this;
  }

  // Right fold in the inner map's entry order.
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

  // f(left value, right value) on keys present in both.
  template <class F>
  SEMap union_with(F&& f, const SEMap& right) const {
    if (right.is_empty_node()) return *this;
    switch (shape()) {
      case SEShape::Empty:
        return right;
      case SEShape::Single: {
        const auto& s = *std::get<1>(rep_);
        const Value& lv = s.value;
        return right.alter(s.key, [&](std::optional<Value> rv) -> std::optional<Value> {
          if (!rv) return lv;
          return f(lv, *rv);
        });
      }
      case SEShape::Multi:
        break;
    }
    if (right.shape() == SEShape::Single) {
      const auto& s = *std::get<1>(right.rep_);
      const Value& rv = s.value;
      return alter(s.key, [&](std::optional<Value> lv) -> std::optional<Value> {
        if (!lv) return rv;
        return f(*lv, rv);
      });
    }
    return multi(multi().union_with(f, right.multi()));
  }

  // g maps a value to its replacement, or to nothing to drop the entry.
  template <class G>
  SEMap filter_map(G&& g) const {
    switch (shape()) {
      case SEShape::Empty:
        return *this;
      case SEShape::Single: {
        std::optional<Value> v = g(single_value());
        if (!v) return SEMap{};
        return single(single_key(), std::move(*v));
      }
      case SEShape::Multi:
        return multi(multi().filter_map(g));
    }
    return *this;
  }

  template <class P>
  SEMap filter(P&& keep) const {
    return filter_map([&](const Value& v) -> std::optional<Value> {
      if (keep(v)) return v;
      return std::nullopt;
    });
  }

  // The same map shape holding W values.
  template <class W, class F, class I = Inner>
  auto map_values(F&& f) const {
    using Out = SEMap<Key, W, typename I::template rebind<W>>;
    switch (shape()) {
      case SEShape::Empty:
        return Out{};
      case SEShape::Single:
        return Out::single(single_key(), f(single_value()));
      case SEShape::Multi:
        return Out::multi(multi().template map_values<W>(f));
    }
    return Out{};
  }

  std::size_t size() const {
    return foldr([](const Value&, std::size_t n) { return n + 1; }, std::size_t{0});
  }

  static SEMap single(Key k, Value v) {
    SEMap m;
    m.rep_ = std::make_shared<const SingleEntry>(SingleEntry{std::move(k), std::move(v)});
    return m;
  }
  static SEMap multi(Inner inner) {
    SEMap m;
    m.rep_ = std::make_shared<const Inner>(std::move(inner));
    return m;
  }

 private:
  struct SingleEntry {
    Key key;
    Value value;
  };
  std::variant<std::monostate, std::shared_ptr<const SingleEntry>, std::shared_ptr<const Inner>> rep_;
};

// Triemap keyed by lists of TM's keys: lm_nil holds the value for the empty
// list, lm_cons maps the head to a ListMap for the tail.
template <template <class> class TM, class V>
class ListNode;

template <template <class> class TM, class V>
using ListMap = SEMap<std::vector<typename TM<V>::key_type>, V, ListNode<TM, V>>;

template <template <class> class TM, class V>
class ListNode {
 public:
  using key_type = std::vector<typename TM<V>::key_type>;
  using mapped_type = V;
  using Map = ListMap<TM, V>;

  const V* lookup(const key_type& ks) const { return lookup_from(ks, 0); }

  const V* lookup_from(const key_type& ks, std::size_t i) const {
    if (i == ks.size()) return nil_ ? &*nil_ : nullptr;
    const Map* tail = cons_.lookup(ks[i]);
    if (!tail) return nullptr;
    return lookup_tail(*tail, ks, i + 1);
  }

  ListNode alter(const key_type& ks, const TF<V>& tf) const { return alter_from(ks, 0, tf); }

  ListNode alter_from(const key_type& ks, std::size_t i, const TF<V>& tf) const {
    ListNode out = *this;
    if (i == ks.size()) {
      out.nil_ = tf(nil_);
      return out;
    }
    out.cons_ = cons_.alter(ks[i], [&](std::optional<Map> tail) -> std::optional<Map> {
      return alter_tail(tail ? *tail : Map{}, ks, i + 1, tf);
    });
    return out;
  }

  template <class R, class F>
  R foldr(F&& f, R z) const {
    R acc = cons_.foldr([&](const Map& tail, R a) { return tail.foldr(f, std::move(a)); }, std::move(z));
    if (nil_) acc = f(*nil_, std::move(acc));
    return acc;
  }

  template <class F>
  ListNode union_with(F&& f, const ListNode& right) const {
    ListNode out;
    if (nil_ && right.nil_) {
      out.nil_ = f(*nil_, *right.nil_);
    } else {
      out.nil_ = nil_ ? nil_ : right.nil_;
    }
    out.cons_ = cons_.union_with([&](const Map& a, const Map& b) { return a.union_with(f, b); }, right.cons_);
    return out;
  }

  template <class G>
  ListNode filter_map(G&& g) const {
    ListNode out;
    if (nil_) out.nil_ = g(*nil_);
    out.cons_ = cons_.filter_map([&](const Map& tail) -> std::optional<Map> {
      Map t = tail.filter_map(g);
      if (t.is_empty_node()) return std::nullopt;
      return t;
    });
    return out;
  }

  template <class W>
  using rebind = ListNode<TM, W>;

  template <class W, class F>
  ListNode<TM, W> map_values(F&& f) const {
    using Target = ListMap<TM, W>;
    ListNode<TM, W> out;
    if (nil_) out.nil_ = f(*nil_);
    out.cons_ = cons_.template map_values<Target>([&](const Map& tail) { return tail.template map_values<W>(f); });
    return out;
  }

  const std::optional<V>& nil() const { return nil_; }
  const TM<Map>& cons() const { return cons_; }

 private:
  static const V* lookup_tail(const Map& m, const key_type& ks, std::size_t i);
  static Map alter_tail(const Map& m, const key_type& ks, std::size_t i, const TF<V>& tf);

  template <template <class> class, class>
  friend class ListNode;

  std::optional<V> nil_;
  TM<Map> cons_;
};

// The SEMap wrapper compares whole remaining suffixes in its Single case, so
// the tail is addressed by a fresh key vector.
template <template <class> class TM, class V>
const V* ListNode<TM, V>::lookup_tail(const Map& m, const key_type& ks, std::size_t i) {
  switch (m.shape()) {
    case SEShape::Empty:
      return nullptr;
    case SEShape::Multi:
      return m.multi().lookup_from(ks, i);
    case SEShape::Single:
      break;
  }
  return m.lookup(key_type(ks.begin() + static_cast<std::ptrdiff_t>(i), ks.end()));
}

template <template <class> class TM, class V>
auto ListNode<TM, V>::alter_tail(const Map& m, const key_type& ks, std::size_t i, const TF<V>& tf) -> Map {
  if (m.shape() == SEShape::Multi) return Map::multi(m.multi().alter_from(ks, i, tf));
  return m.alter(key_type(ks.begin() + static_cast<std::ptrdiff_t>(i), ks.end()), tf);
}

template <template <class> class TM, class V>
const V* lookup_lm(const std::vector<typename TM<V>::key_type>& ks, const ListMap<TM, V>& m) {
  return m.lookup(ks);
}

template <template <class> class TM, class V>
ListMap<TM, V> alter_lm(const std::vector<typename TM<V>::key_type>& ks, const TF<V>& tf, const ListMap<TM, V>& m) {
  return m.alter(ks, tf);
}

}  // namespace triemap
