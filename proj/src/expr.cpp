#include "triemap/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

namespace triemap {

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '\'';
}

// A DBEnv extended by binders met during a traversal. Levels continue from
// base.next(); lookups see the innermost binding first.
class Scope {
 public:
  explicit Scope(const DBEnv& base) : base_(base) {}

  void push(const VarName& v) { local_.push_back(&v); }
  void pop() { local_.pop_back(); }

  std::optional<DBNum> lookup(const VarName& v) const {
    for (std::size_t i = local_.size(); i-- > 0;) {
      if (*local_[i] == v) return base_.next() + static_cast<DBNum>(i);
    }
    return base_.lookup(v);
  }

 private:
  const DBEnv& base_;
  std::vector<const VarName*> local_;
};

enum Tag : std::uint8_t { kBound = 0, kFree = 1, kApp = 2, kLam = 3 };

Tag tag_of(const Expr& e, const Scope& scope, std::optional<DBNum>& level) {
  switch (e.kind()) {
    case ExprKind::Var:
      level = scope.lookup(e.name());
      return level ? kBound : kFree;
    case ExprKind::App:
      return kApp;
    case ExprKind::Lam:
      return kLam;
  }
  return kLam;
}

std::strong_ordering compare_in(const Expr& a, Scope& sa, const Expr& b, Scope& sb) {
  std::optional<DBNum> la, lb;
  Tag ta = tag_of(a, sa, la);
  Tag tb = tag_of(b, sb, lb);
  if (ta != tb) return ta <=> tb;
  switch (ta) {
    case kBound:
      return *la <=> *lb;
    case kFree:
      return a.name() <=> b.name();
    case kApp: {
      auto c = compare_in(a.fun(), sa, b.fun(), sb);
      if (c != 0) return c;
      return compare_in(a.arg(), sa, b.arg(), sb);
    }
    case kLam: {
      sa.push(a.name());
      sb.push(b.name());
      auto c = compare_in(a.body(), sa, b.body(), sb);
      sa.pop();
      sb.pop();
      return c;
    }
  }
  return std::strong_ordering::equal;
}

bool eq_in(const Expr& a, Scope& sa, const Expr& b, Scope& sb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::Var: {
      auto la = sa.lookup(a.name());
      auto lb = sb.lookup(b.name());
      if (la || lb) return la == lb;
      return a.name() == b.name();
    }
    case ExprKind::App:
      return eq_in(a.fun(), sa, b.fun(), sb) && eq_in(a.arg(), sa, b.arg(), sb);
    case ExprKind::Lam: {
      sa.push(a.name());
      sb.push(b.name());
      bool r = eq_in(a.body(), sa, b.body(), sb);
      sa.pop();
      sb.pop();
      return r;
    }
  }
  return false;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_byte(std::uint64_t& h, std::uint8_t b) {
  h ^= b;
  h *= kFnvPrime;
}

void hash_in(const Expr& e, Scope& scope, std::uint64_t& h) {
  std::optional<DBNum> level;
  Tag t = tag_of(e, scope, level);
  fnv_byte(h, t);
  switch (t) {
    case kBound: {
      auto v = static_cast<std::uint64_t>(*level);
      for (int i = 0; i < 8; ++i) fnv_byte(h, static_cast<std::uint8_t>(v >> (8 * i)));
      break;
    }
    case kFree:
      for (char c : e.name().str()) fnv_byte(h, static_cast<std::uint8_t>(c));
      break;
    case kApp:
      hash_in(e.fun(), scope, h);
      hash_in(e.arg(), scope, h);
      break;
    case kLam:
      scope.push(e.name());
      hash_in(e.body(), scope, h);
      scope.pop();
      break;
  }
}

bool no_captured_in(const DBEnv& env, const Expr& e, std::vector<const VarName*>& inner) {
  switch (e.kind()) {
    case ExprKind::Var:
      if (std::any_of(inner.begin(), inner.end(), [&](const VarName* b) { return *b == e.name(); })) {
        return true;
      }
      return !env.lookup(e.name()).has_value();
    case ExprKind::App:
      return no_captured_in(env, e.fun(), inner) && no_captured_in(env, e.arg(), inner);
    case ExprKind::Lam: {
      inner.push_back(&e.name());
      bool r = no_captured_in(env, e.body(), inner);
      inner.pop_back();
      return r;
    }
  }
  return true;
}

void print_to(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Var:
      out += "(var ";
      out += e.name().str();
      out += ')';
      return;
    case ExprKind::App:
      out += "(app ";
      print_to(e.fun(), out);
      out += ' ';
      print_to(e.arg(), out);
      out += ')';
      return;
    case ExprKind::Lam:
      out += "(lam ";
      out += e.name().str();
      out += ' ';
      print_to(e.body(), out);
      out += ')';
      return;
  }
}

}  // namespace

bool VarName::is_valid(std::string_view name) {
  if (name.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), is_name_char);
}

VarName::VarName(std::string name) : name_(std::move(name)) {
  if (!is_valid(name_)) throw std::invalid_argument("invalid variable name: '" + name_ + "'");
}

Expr Expr::var(VarName name) {
  return Expr(std::make_shared<const Node>(Node{ExprKind::Var, std::move(name), Expr(nullptr), Expr(nullptr), 1}));
}

Expr Expr::app(Expr fun, Expr arg) {
  std::size_t size = 1 + fun.size() + arg.size();
  return Expr(std::make_shared<const Node>(Node{ExprKind::App, std::nullopt, std::move(fun), std::move(arg), size}));
}

Expr Expr::lam(VarName binder, Expr body) {
  std::size_t size = 1 + body.size();
  return Expr(
      std::make_shared<const Node>(Node{ExprKind::Lam, std::move(binder), std::move(body), Expr(nullptr), size}));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case ExprKind::Var:
      return a.name() == b.name();
    case ExprKind::App:
      return a.fun() == b.fun() && a.arg() == b.arg();
    case ExprKind::Lam:
      return a.name() == b.name() && a.body() == b.body();
  }
  return false;
}

DBEnv DBEnv::extend(const VarName& v) const {
  DBEnv out;
  out.next_ = next_ + 1;
  auto entries = std::make_shared<Entries>();
  if (bindings_) {
    entries->reserve(bindings_->size() + 1);
    *entries = *bindings_;
  }
  auto it = std::lower_bound(entries->begin(), entries->end(), v,
                             [](const auto& entry, const VarName& name) { return entry.first < name; });
  if (it != entries->end() && it->first == v) {
    it->second = next_;
  } else {
    entries->insert(it, {v, next_});
  }
  out.bindings_ = std::move(entries);
  return out;
}

std::optional<DBNum> DBEnv::lookup(const VarName& v) const {
  if (!bindings_) return std::nullopt;
  auto it = std::lower_bound(bindings_->begin(), bindings_->end(), v,
                             [](const auto& entry, const VarName& name) { return entry.first < name; });
  if (it != bindings_->end() && it->first == v) return it->second;
  return std::nullopt;
}

std::map<VarName, DBNum> DBEnv::bindings() const {
  std::map<VarName, DBNum> out;
  if (bindings_) out.insert(bindings_->begin(), bindings_->end());
  return out;
}

bool alpha_eq(const AlphaExpr& a, const AlphaExpr& b) {
  Scope sa(a.env), sb(b.env);
  return eq_in(a.expr, sa, b.expr, sb);
}

std::strong_ordering alpha_compare(const AlphaExpr& a, const AlphaExpr& b) {
  Scope sa(a.env), sb(b.env);
  return compare_in(a.expr, sa, b.expr, sb);
}

std::uint64_t alpha_hash(const AlphaExpr& a) {
  Scope scope(a.env);
  std::uint64_t h = kFnvOffset;
  hash_in(a.expr, scope, h);
  return h;
}

bool no_captured(const DBEnv& env, const Expr& e) {
  if (env.empty()) return true;
  std::vector<const VarName*> inner;
  return no_captured_in(env, e, inner);
}

bool eq_expr(const Expr& a, const Expr& b) {
#ifdef TRIEMAP_FAULT_FLIP_EQ_EXPR
  return !alpha_eq(AlphaExpr::closed(a), AlphaExpr::closed(b));
#else
  return alpha_eq(AlphaExpr::closed(a), AlphaExpr::closed(b));
#endif
}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column),
      message_(what) {}

void ExprReader::advance() {
  if (text_[pos_] == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  ++pos_;
}

void ExprReader::skip_ws() {
  while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
}

bool ExprReader::at_end() {
  skip_ws();
  return pos_ >= text_.size();
}

void ExprReader::fail(const std::string& msg) const { throw ParseError(msg, line_, column_); }

void ExprReader::expect(char c) {
  skip_ws();
  if (peek() != c) {
    if (pos_ >= text_.size()) fail(std::string("expected '") + c + "', found end of input");
    fail(std::string("expected '") + c + "', found '" + peek() + "'");
  }
  advance();
}

std::string ExprReader::word() {
  skip_ws();
  std::size_t start = pos_;
  while (pos_ < text_.size() && is_name_char(text_[pos_])) advance();
  if (start == pos_) {
    if (pos_ >= text_.size()) fail("expected a name, found end of input");
    fail(std::string("expected a name, found '") + peek() + "'");
  }
  return std::string(text_.substr(start, pos_ - start));
}

Expr ExprReader::read() {
  expect('(');
  std::size_t kw_line = line_, kw_col = column_;
  std::string kw = word();
  Expr result = [&] {
    if (kw == "var" || kw == "lam") {
      skip_ws();
      std::size_t name_line = line_, name_col = column_;
      std::string name = word();
      if (!VarName::is_valid(name)) throw ParseError("invalid variable name '" + name + "'", name_line, name_col);
      if (kw == "var") return Expr::var(VarName(std::move(name)));
      Expr body = read();
      return Expr::lam(VarName(std::move(name)), std::move(body));
    }
    if (kw == "app") {
      Expr fun = read();
      Expr arg = read();
      return Expr::app(std::move(fun), std::move(arg));
    }
    throw ParseError("unknown form '" + kw + "' (expected var, app or lam)", kw_line, kw_col);
  }();
  expect(')');
  return result;
}

Expr parse_expr(std::string_view text) {
  ExprReader reader(text);
  Expr e = reader.read();
  if (!reader.at_end()) throw ParseError("trailing input after expression", reader.line(), reader.column());
  return e;
}

std::string print_expr(const Expr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

}  // namespace triemap
