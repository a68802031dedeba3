#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "triemap/expr.hpp"
#include "triemap/exprmap.hpp"

namespace triemap::bench {

// splitmix64: identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  // Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(below(hi - lo + 1)); }

 private:
  std::uint64_t state_;
};

// Random expression of exactly target_size constructors. Leaves pick a bound
// variable with probability 1/2 when any is in scope, otherwise a name from
// free_pool; inner nodes are App with probability 2/3 (Lam when the size
// leaves no room for an App). Lambdas bind a name not already on bound_stack.
Expr gen_expr(Rng& rng, std::size_t target_size, const std::vector<VarName>& free_pool,
              std::vector<VarName>& bound_stack);

const std::vector<VarName>& default_free_pool();

enum class PrefixKind { None, Lam, App1, App2 };

// The name used by prefix layers; the generator never produces it.
const VarName& prefix_name();

// Wraps `layers` layers around e: Lam "$" / App (Var "$") _ / App _ (Var "$").
Expr wrap_prefix(const Expr& e, PrefixKind kind, std::size_t layers);

struct CorpusParams {
  std::size_t map_size = 10000;
  std::size_t expr_size = 100;
  std::uint64_t seed = 42;
  PrefixKind prefix = PrefixKind::None;
  std::size_t prefix_len = 100;
};

// map_size expressions from distinct alpha classes, each of size within
// expr_size +/- 50% before prefixing.
struct Corpus {
  CorpusParams params;
  std::vector<Expr> exprs;
};

Corpus make_corpus(const CorpusParams& params);

// An expression (with the corpus prefix) whose alpha class is not in corpus.
Expr fresh_expr(const Corpus& corpus, Rng& rng);

enum class Impl { TM, OM, HM };

std::string_view impl_name(Impl impl);
Impl parse_impl(std::string_view name);  // case-insensitive; throws std::invalid_argument

using Value = std::int64_t;
using TrieBaseline = ExprMap<Value>;
using OrderedBaseline = std::map<AlphaExpr, Value, AlphaLess>;
using HashBaseline = std::unordered_map<AlphaExpr, Value, AlphaHasher, AlphaEqual>;

// Corpus entry i maps to value i.
TrieBaseline build_tm(const Corpus& corpus);
OrderedBaseline build_om(const Corpus& corpus);
HashBaseline build_hm(const Corpus& corpus);

std::size_t census_om(const OrderedBaseline& m);
std::size_t census_hm(const HashBaseline& m);

const std::vector<std::string>& suite_names();
bool is_space_suite(std::string_view suite);

struct BenchParams {
  std::size_t map_size = 10000;
  std::size_t expr_size = 100;
  std::uint64_t seed = 42;
  int reps = 5;
  std::size_t prefix_len = 100;
};

struct BenchResult {
  std::string suite;
  Impl impl = Impl::TM;
  std::size_t map_size = 0;
  std::size_t expr_size = 0;
  std::uint64_t seed = 0;
  int reps = 0;
  std::int64_t total_ns = 0;  // minimum over reps
  double per_op_ns = 0;
  std::optional<std::size_t> node_count;
  std::size_t op_count = 0;
  // Functional output (lookup hit sum, fold sum, union sum, map size, ...);
  // must agree across implementations.
  std::int64_t check = 0;
};

// Runs suites over corpora generated once per prefix kind.
class Harness {
 public:
  explicit Harness(BenchParams params) : params_(params) {}

  const BenchParams& params() const { return params_; }
  const Corpus& corpus(PrefixKind kind);

  // Throws std::invalid_argument for an unknown suite.
  BenchResult run(std::string_view suite, Impl impl);

 private:
  BenchParams params_;
  std::map<PrefixKind, Corpus> corpora_;
};

inline constexpr std::string_view kCsvHeader = "suite,impl,M,E,seed,reps,total_ns,per_op_ns,node_count";

void write_csv_row(std::ostream& out, const BenchResult& r);

}  // namespace triemap::bench
