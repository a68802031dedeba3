#include "triemap/oracle.hpp"

#include <set>

namespace triemap::oracle {

namespace {

// binders: innermost last
void nameless(const Expr& e, std::vector<std::string>& binders, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Var: {
      for (std::size_t i = binders.size(); i-- > 0;) {
        if (binders[i] == e.name().str()) {
          out += "#" + std::to_string(i) + " ";
          return;
        }
      }
      out += e.name().str() + " ";
      return;
    }
    case ExprKind::App:
      out += "@ ";
      nameless(e.fun(), binders, out);
      nameless(e.arg(), binders, out);
      return;
    case ExprKind::Lam:
      out += "\\ ";
      binders.push_back(e.name().str());
      nameless(e.body(), binders, out);
      binders.pop_back();
      return;
  }
}

std::string nameless(const Expr& e) {
  std::vector<std::string> binders;
  std::string out;
  nameless(e, binders, out);
  return out;
}

void free_vars(const Expr& e, std::vector<std::string>& binders, std::set<std::string>& out) {
  switch (e.kind()) {
    case ExprKind::Var:
      if (std::find(binders.begin(), binders.end(), e.name().str()) == binders.end()) out.insert(e.name().str());
      return;
    case ExprKind::App:
      free_vars(e.fun(), binders, out);
      free_vars(e.arg(), binders, out);
      return;
    case ExprKind::Lam:
      binders.push_back(e.name().str());
      free_vars(e.body(), binders, out);
      binders.pop_back();
      return;
  }
}

std::optional<std::size_t> innermost(const std::vector<std::pair<std::string, std::string>>& stack,
                                     const std::string& name, bool pattern_side) {
  for (std::size_t i = stack.size(); i-- > 0;) {
    const std::string& n = pattern_side ? stack[i].first : stack[i].second;
    if (n == name) return i;
  }
  return std::nullopt;
}

struct Matcher {
  const std::set<std::string>& vars;
  std::vector<std::pair<std::string, std::string>> stack;  // (pattern binder, target binder)
  Binding binding;

  bool go(const Expr& p, const Expr& t) {
    if (p.is_var()) {
      const std::string& v = p.name().str();
      if (auto i = innermost(stack, v, true)) {
        if (!t.is_var()) return false;
        return innermost(stack, t.name().str(), false) == i;
      }
      if (vars.count(v)) {
        std::vector<std::string> none;
        std::set<std::string> fv;
        free_vars(t, none, fv);
        for (const auto& [pb, tb] : stack) {
          if (fv.count(tb)) return false;
        }
        auto it = binding.find(p.name());
        if (it == binding.end()) {
          binding.emplace(p.name(), t);
          return true;
        }
        return alpha_equivalent(it->second, t);
      }
      return t.is_var() && t.name() == p.name() && !innermost(stack, t.name().str(), false);
    }
    if (p.is_app()) {
      return t.is_app() && go(p.fun(), t.fun()) && go(p.arg(), t.arg());
    }
    if (!t.is_lam()) return false;
    stack.emplace_back(p.name().str(), t.name().str());
    bool ok = go(p.body(), t.body());
    stack.pop_back();
    return ok;
  }
};

void canon_pattern(const Expr& e, const std::set<std::string>& vars, std::vector<std::string>& binders,
                   std::map<std::string, std::size_t>& numbering, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Var: {
      const std::string& n = e.name().str();
      for (std::size_t i = binders.size(); i-- > 0;) {
        if (binders[i] == n) {
          out += "#" + std::to_string(i) + " ";
          return;
        }
      }
      if (vars.count(n)) {
        auto [it, fresh] = numbering.emplace(n, numbering.size() + 1);
        out += "?" + std::to_string(it->second) + " ";
        return;
      }
      out += n + " ";
      return;
    }
    case ExprKind::App:
      out += "@ ";
      canon_pattern(e.fun(), vars, binders, numbering, out);
      canon_pattern(e.arg(), vars, binders, numbering, out);
      return;
    case ExprKind::Lam:
      out += "\\ ";
      binders.push_back(e.name().str());
      canon_pattern(e.body(), vars, binders, numbering, out);
      binders.pop_back();
      return;
  }
}

}  // namespace

bool alpha_equivalent(const Expr& a, const Expr& b) { return nameless(a) == nameless(b); }

std::string canonical_pattern(const std::vector<VarName>& vars, const Expr& body) {
  std::set<std::string> names;
  for (const auto& v : vars) names.insert(v.str());
  std::vector<std::string> binders;
  std::map<std::string, std::size_t> numbering;
  std::string out;
  canon_pattern(body, names, binders, numbering, out);
  return out;
}

std::optional<Binding> oracle_match_one(const std::vector<VarName>& vars, const Expr& pattern, const Expr& target) {
  std::set<std::string> names;
  for (const auto& v : vars) names.insert(v.str());
  Matcher m{names, {}, {}};
  if (!m.go(pattern, target)) return std::nullopt;
  return m.binding;
}

}  // namespace triemap::oracle
