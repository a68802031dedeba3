#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace triemap {

// A variable name: nonempty, over [A-Za-z0-9_$'], first character not a digit.
class VarName {
 public:
  explicit VarName(std::string name);
  explicit VarName(const char* name) : VarName(std::string(name)) {}

  const std::string& str() const { return name_; }

  friend bool operator==(const VarName&, const VarName&) = default;
  friend std::strong_ordering operator<=>(const VarName&, const VarName&) = default;

  static bool is_valid(std::string_view name);

 private:
  std::string name_;
};

enum class ExprKind : std::uint8_t { Var, App, Lam };

// Immutable expression tree. Copies share structure.
class Expr {
 public:
  static Expr var(VarName name);
  static Expr app(Expr fun, Expr arg);
  static Expr lam(VarName binder, Expr body);

  ExprKind kind() const;
  bool is_var() const { return kind() == ExprKind::Var; }
  bool is_app() const { return kind() == ExprKind::App; }
  bool is_lam() const { return kind() == ExprKind::Lam; }

  // Var: the variable; Lam: the binder.
  const VarName& name() const;
  const Expr& fun() const;
  const Expr& arg() const;
  const Expr& body() const;

  // Number of constructors.
  std::size_t size() const;

  // Structural equality: binder names matter.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  ExprKind kind;
  std::optional<VarName> name;
  Expr left;
  Expr right;
  std::size_t size;
};

inline ExprKind Expr::kind() const { return node_->kind; }
inline const VarName& Expr::name() const { return *node_->name; }
inline const Expr& Expr::fun() const { return node_->left; }
inline const Expr& Expr::arg() const { return node_->right; }
inline const Expr& Expr::body() const { return node_->left; }
inline std::size_t Expr::size() const { return node_->size; }

// 1-based De Bruijn level.
using DBNum = std::int32_t;

// Maps lambda-bound names to the level of their binder. Persistent: extend
// returns a new environment and leaves this one untouched.
class DBEnv {
 public:
  DBEnv() = default;

  DBEnv extend(const VarName& v) const;
  std::optional<DBNum> lookup(const VarName& v) const;

  DBNum next() const { return next_; }
  bool empty() const { return !bindings_ || bindings_->empty(); }
  std::map<VarName, DBNum> bindings() const;

 private:
  using Entries = std::vector<std::pair<VarName, DBNum>>;  // sorted by name
  DBNum next_ = 1;
  std::shared_ptr<const Entries> bindings_;
};

inline DBEnv empty_dbe() { return DBEnv{}; }
inline DBEnv extend_dbe(const VarName& v, const DBEnv& env) { return env.extend(v); }
inline std::optional<DBNum> lookup_dbe(const VarName& v, const DBEnv& env) { return env.lookup(v); }

// An expression under a binding environment: the alpha-insensitive key.
struct AlphaExpr {
  DBEnv env;
  Expr expr;

  static AlphaExpr closed(Expr e) { return AlphaExpr{DBEnv{}, std::move(e)}; }
};

// Equality modulo renaming of lambda-bound variables. Variables bound in the
// respective environments compare by level, all others by name.
bool alpha_eq(const AlphaExpr& a, const AlphaExpr& b);

// Total order consistent with alpha_eq. Tags order as
// bound var < free var < App < Lam.
std::strong_ordering alpha_compare(const AlphaExpr& a, const AlphaExpr& b);

// FNV-1a-64 over the pre-order serialization: one tag byte per node, then the
// bound level (8 bytes, little endian) or the free name's bytes.
std::uint64_t alpha_hash(const AlphaExpr& a);

inline bool operator==(const AlphaExpr& a, const AlphaExpr& b) { return alpha_eq(a, b); }

struct AlphaLess {
  bool operator()(const AlphaExpr& a, const AlphaExpr& b) const { return alpha_compare(a, b) < 0; }
};
struct AlphaHasher {
  std::size_t operator()(const AlphaExpr& a) const { return static_cast<std::size_t>(alpha_hash(a)); }
};
struct AlphaEqual {
  bool operator()(const AlphaExpr& a, const AlphaExpr& b) const { return alpha_eq(a, b); }
};

// True iff no variable occurring free in e is bound in env.
bool no_captured(const DBEnv& env, const Expr& e);

// Alpha-equality of two expressions with empty environments.
bool eq_expr(const Expr& a, const Expr& b);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  // The description without the position prefix.
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

// Reads expressions in the s-expression syntax
//   (var NAME) | (app E E) | (lam NAME E)
// Whitespace between tokens is ignored.
class ExprReader {
 public:
  explicit ExprReader(std::string_view text) : text_(text) {}

  Expr read();
  bool at_end();  // skips whitespace

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  void skip_ws();
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void advance();
  void expect(char c);
  std::string word();
  [[noreturn]] void fail(const std::string& msg) const;

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

// Parses exactly one expression; trailing non-whitespace is an error.
Expr parse_expr(std::string_view text);
std::string print_expr(const Expr& e);

}  // namespace triemap
