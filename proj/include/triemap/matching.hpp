#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "triemap/expr.hpp"

namespace triemap {

// Canonical number of a pattern variable: 1, 2, ... in first-occurrence order.
using PatKey = DBNum;
using PatKeys = std::map<VarName, PatKey>;
using Subst = std::map<PatKey, Expr>;
using Unit = std::monostate;

// A non-deterministic computation threading a Subst: semantically a function
// Subst -> [(V, Subst)]. Results keep a deterministic order; alt is
// left-biased concatenation.
template <class V>
class MatchComputation {
 public:
  using Results = std::vector<std::pair<V, Subst>>;
  using Step = std::function<Results(const Subst&)>;

  explicit MatchComputation(Step step) : step_(std::move(step)) {}

  Results run_from(const Subst& s) const { return step_(s); }

  static MatchComputation pure(V v) {
    return MatchComputation([v = std::move(v)](const Subst& s) { return Results{{v, s}}; });
  }

  static MatchComputation failure() {
    return MatchComputation([](const Subst&) { return Results{}; });
  }

  MatchComputation alt(MatchComputation other) const {
    return MatchComputation([a = step_, b = std::move(other.step_)](const Subst& s) {
      Results out = a(s);
      Results more = b(s);
      out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
      return out;
    });
  }

  // Sequencing: f receives each result value and continues from its Subst.
  template <class F>
  auto bind(F f) const -> std::invoke_result_t<F, const V&> {
    using Next = std::invoke_result_t<F, const V&>;
    using NextResults = typename Next::Results;
    return Next([a = step_, f = std::move(f)](const Subst& s) {
      NextResults out;
      for (const auto& [v, s1] : a(s)) {
        NextResults more = f(v).run_from(s1);
        out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
      }
      return out;
    });
  }

  template <class W>
  MatchComputation<W> then(MatchComputation<W> next) const {
    return bind([next = std::move(next)](const V&) { return next; });
  }

 private:
  template <class>
  friend class MatchComputation;
  Step step_;
};

template <class V>
MatchComputation<V> msum(std::vector<MatchComputation<V>> alternatives) {
  return MatchComputation<V>([alts = std::move(alternatives)](const Subst& s) {
    typename MatchComputation<V>::Results out;
    for (const auto& c : alts) {
      auto more = c.run_from(s);
      out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    return out;
  });
}

// Runs c from the empty substitution.
template <class V>
std::vector<std::pair<Subst, V>> run_match(const MatchComputation<V>& c) {
  std::vector<std::pair<Subst, V>> out;
  for (auto& [v, s] : c.run_from(Subst{})) out.emplace_back(std::move(s), std::move(v));
  return out;
}

template <class V>
MatchComputation<V> lift_optional(std::optional<V> o) {
  if (!o) return MatchComputation<V>::failure();
  return MatchComputation<V>::pure(std::move(*o));
}

MatchComputation<Unit> refine_match(std::function<std::optional<Subst>(const Subst&)> refine);

// Numbers the pattern variables of e in pre-order first-occurrence order,
// skipping occurrences shadowed by a lambda inside e. Variables that never
// occur get no key. Throws std::invalid_argument on duplicate pvars.
PatKeys canon_pat_keys(const std::vector<VarName>& pvars, const Expr& e);

// A pattern body under its binding environment, with the canonical numbering
// of its quantified variables. The numbering is shared between the
// sub-patterns produced while descending a pattern.
class PatExpr {
 public:
  PatExpr(PatKeys keys, AlphaExpr body)
      : keys_(std::make_shared<const PatKeys>(std::move(keys))), body_(std::move(body)) {}

  static PatExpr closed(const std::vector<VarName>& pvars, Expr body) {
    PatKeys keys = canon_pat_keys(pvars, body);
    return PatExpr(std::move(keys), AlphaExpr::closed(std::move(body)));
  }

  const PatKeys& keys() const { return *keys_; }
  const AlphaExpr& body() const { return body_; }

  // Same numbering, different body position.
  PatExpr with_body(AlphaExpr body) const { return PatExpr(keys_, std::move(body)); }

  // The key of v if v occurs here as a pattern variable (lambda bindings win).
  std::optional<PatKey> pat_key(const VarName& v) const;

 private:
  PatExpr(std::shared_ptr<const PatKeys> keys, AlphaExpr body) : keys_(std::move(keys)), body_(std::move(body)) {}

  std::shared_ptr<const PatKeys> keys_;
  AlphaExpr body_;
};

// Alpha-equality of bodies, with pattern-variable occurrences compared by
// their keys rather than their names.
bool pattern_equal(const PatExpr& a, const PatExpr& b);
inline bool operator==(const PatExpr& a, const PatExpr& b) { return pattern_equal(a, b); }

// Binds pk to the target, or checks it against an existing binding. Fails if
// the target mentions a variable bound in its environment.
MatchComputation<Unit> match_pat_var(PatKey pk, const AlphaExpr& target);

// Simultaneous descent over pattern and target, extending the current Subst.
// Yields at most one result.
MatchComputation<Unit> match_expr(const PatExpr& pat, const AlphaExpr& target);

// Replaces pattern-variable occurrences of a closed pattern by their
// bindings, renaming pattern binders where a binding would be captured.
// Unbound pattern variables stay as free variables.
Expr instantiate(const PatExpr& pat, const Subst& subst);

}  // namespace triemap
