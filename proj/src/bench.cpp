#include "triemap/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace triemap::bench {

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

namespace {

VarName fresh_binder(const std::vector<VarName>& bound_stack) {
  for (std::size_t k = bound_stack.size();; ++k) {
    VarName name("v" + std::to_string(k));
    if (std::find(bound_stack.begin(), bound_stack.end(), name) == bound_stack.end()) return name;
  }
}

}  // namespace

Expr gen_expr(Rng& rng, std::size_t target_size, const std::vector<VarName>& free_pool,
              std::vector<VarName>& bound_stack) {
  if (target_size == 0) throw std::invalid_argument("gen_expr: target_size must be >= 1");
  if (target_size == 1) {
    if (!bound_stack.empty() && rng.below(2) == 0) return Expr::var(bound_stack[rng.below(bound_stack.size())]);
    return Expr::var(free_pool[rng.below(free_pool.size())]);
  }
  if (target_size >= 3 && rng.below(3) < 2) {
    std::size_t left = rng.between(1, target_size - 2);
    Expr fun = gen_expr(rng, left, free_pool, bound_stack);
    Expr arg = gen_expr(rng, target_size - 1 - left, free_pool, bound_stack);
    return Expr::app(std::move(fun), std::move(arg));
  }
  VarName binder = fresh_binder(bound_stack);
  bound_stack.push_back(binder);
  Expr body = gen_expr(rng, target_size - 1, free_pool, bound_stack);
  bound_stack.pop_back();
  return Expr::lam(std::move(binder), std::move(body));
}

const std::vector<VarName>& default_free_pool() {
  static const std::vector<VarName> pool = [] {
    std::vector<VarName> p;
    for (const char* n : {"a", "b", "c", "d", "e", "f", "g", "h"}) p.emplace_back(n);
    return p;
  }();
  return pool;
}

const VarName& prefix_name() {
  static const VarName name("$");
  return name;
}

Expr wrap_prefix(const Expr& e, PrefixKind kind, std::size_t layers) {
  if (kind == PrefixKind::None) return e;
  Expr out = e;
  const Expr dollar = Expr::var(prefix_name());
  for (std::size_t i = 0; i < layers; ++i) {
    switch (kind) {
      case PrefixKind::Lam:
        out = Expr::lam(prefix_name(), std::move(out));
        break;
      case PrefixKind::App1:
        out = Expr::app(dollar, std::move(out));
        break;
      case PrefixKind::App2:
        out = Expr::app(std::move(out), dollar);
        break;
      case PrefixKind::None:
        break;
    }
  }
  return out;
}

namespace {

using AlphaSet = std::unordered_set<AlphaExpr, AlphaHasher, AlphaEqual>;

Expr random_body(Rng& rng, std::size_t expr_size) {
  std::size_t lo = std::max<std::size_t>(1, expr_size - expr_size / 2);
  std::size_t hi = std::max<std::size_t>(lo, expr_size + expr_size / 2);
  std::vector<VarName> bound;
  return gen_expr(rng, rng.between(lo, hi), default_free_pool(), bound);
}

}  // namespace

Corpus make_corpus(const CorpusParams& params) {
  Corpus corpus{params, {}};
  corpus.exprs.reserve(params.map_size);
  Rng rng(params.seed);
  AlphaSet seen;
  while (corpus.exprs.size() < params.map_size) {
    Expr e = random_body(rng, params.expr_size);
    if (!seen.insert(AlphaExpr::closed(e)).second) continue;
    corpus.exprs.push_back(wrap_prefix(e, params.prefix, params.prefix_len));
  }
  return corpus;
}

Expr fresh_expr(const Corpus& corpus, Rng& rng) {
  AlphaSet seen;
  for (const auto& e : corpus.exprs) seen.insert(AlphaExpr::closed(e));
  for (;;) {
    Expr e = wrap_prefix(random_body(rng, corpus.params.expr_size), corpus.params.prefix, corpus.params.prefix_len);
    if (!seen.count(AlphaExpr::closed(e))) return e;
  }
}

std::string_view impl_name(Impl impl) {
  switch (impl) {
    case Impl::TM:
      return "TM";
    case Impl::OM:
      return "OM";
    case Impl::HM:
      return "HM";
  }
  return "?";
}

Impl parse_impl(std::string_view name) {
  std::string lower;
  for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "tm") return Impl::TM;
  if (lower == "om") return Impl::OM;
  if (lower == "hm") return Impl::HM;
  throw std::invalid_argument("unknown implementation '" + std::string(name) + "'");
}

TrieBaseline build_tm(const Corpus& corpus) {
  TrieBaseline m;
  Value i = 0;
  for (const auto& e : corpus.exprs) m = m.insert_closed(e, i++);
  return m;
}

OrderedBaseline build_om(const Corpus& corpus) {
  OrderedBaseline m;
  Value i = 0;
  for (const auto& e : corpus.exprs) m.insert_or_assign(AlphaExpr::closed(e), i++);
  return m;
}

HashBaseline build_hm(const Corpus& corpus) {
  HashBaseline m;
  m.reserve(corpus.exprs.size());
  Value i = 0;
  for (const auto& e : corpus.exprs) m.insert_or_assign(AlphaExpr::closed(e), i++);
  return m;
}

std::size_t census_om(const OrderedBaseline& m) {
  std::size_t total = 0;
  for (const auto& [k, v] : m) total += 1 + k.expr.size();
  return total;
}

std::size_t census_hm(const HashBaseline& m) {
  std::size_t total = m.bucket_count();
  for (const auto& [k, v] : m) total += 1 + k.expr.size();
  return total;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "lookup",        "lookup_lam", "lookup_app1", "lookup_app2", "lookup_one", "insert_lookup_one", "fromList",
      "fromList_app1", "union",      "fold",        "space",       "space_lam",  "space_app1",        "space_app2"};
  return names;
}

bool is_space_suite(std::string_view suite) { return suite.starts_with("space"); }

namespace {

// Uniform surface over the three maps. Maps are values; OM/HM inserts mutate
// a private copy.
struct TMOps {
  using Map = TrieBaseline;
  static Map build(const Corpus& c) { return build_tm(c); }
  static Map build_range(const Corpus& c, std::size_t lo, std::size_t hi) {
    Map m;
    for (std::size_t i = lo; i < hi; ++i) m = m.insert_closed(c.exprs[i], static_cast<Value>(i));
    return m;
  }
  static const Value* lookup(const Map& m, const Expr& e) { return m.lookup_closed(e); }
  static Value insert_lookup(Map& m, const Expr& e, Value v) {
    Map m2 = m.insert_closed(e, v);
    return *m2.lookup_closed(e);
  }
  static Map unite(const Map& a, const Map& b) {
    return a.union_with([](Value x, Value y) { return x + y; }, b);
  }
  static Value sum(const Map& m) {
    return m.foldr([](Value v, Value acc) { return v + acc; }, Value{0});
  }
  static std::size_t size(const Map& m) { return m.size(); }
  static std::size_t census(const Map& m) { return node_census(m); }
};

template <class M>
struct StdOps {
  using Map = M;
  static Map build_range(const Corpus& c, std::size_t lo, std::size_t hi) {
    Map m;
    for (std::size_t i = lo; i < hi; ++i) m.insert_or_assign(AlphaExpr::closed(c.exprs[i]), static_cast<Value>(i));
    return m;
  }
  static const Value* lookup(const Map& m, const Expr& e) {
    auto it = m.find(AlphaExpr::closed(e));
    return it == m.end() ? nullptr : &it->second;
  }
  static Value insert_lookup(Map& m, const Expr& e, Value v) {
    m.insert_or_assign(AlphaExpr::closed(e), v);
    return *lookup(m, e);
  }
  static Map unite(const Map& a, const Map& b) {
    Map out = a;
    for (const auto& [k, v] : b) {
      auto [it, inserted] = out.try_emplace(k, v);
      if (!inserted) it->second = it->second + v;
    }
    return out;
  }
  static Value sum(const Map& m) {
    Value total = 0;
    for (const auto& [k, v] : m) total += v;
    return total;
  }
  static std::size_t size(const Map& m) { return m.size(); }
};

struct OMOps : StdOps<OrderedBaseline> {
  static Map build(const Corpus& c) { return build_om(c); }
  static std::size_t census(const Map& m) { return census_om(m); }
};

struct HMOps : StdOps<HashBaseline> {
  static Map build(const Corpus& c) { return build_hm(c); }
  static std::size_t census(const Map& m) { return census_hm(m); }
};

using Clock = std::chrono::steady_clock;

struct Rep {
  std::int64_t ns;
  std::int64_t check;
};

// Keeps results observable so the timed work cannot be elided.
volatile std::int64_t g_sink = 0;

template <class F>
std::int64_t timed(F&& body) {
  auto start = Clock::now();
  std::int64_t r = body();
  auto stop = Clock::now();
  g_sink = g_sink + r;
  return std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
}

PrefixKind prefix_of(std::string_view suite) {
  if (suite.ends_with("_lam")) return PrefixKind::Lam;
  if (suite.ends_with("_app1")) return PrefixKind::App1;
  if (suite.ends_with("_app2")) return PrefixKind::App2;
  return PrefixKind::None;
}

template <class Ops>
BenchResult run_with(std::string_view suite, const Corpus& corpus, const BenchParams& params) {
  using Map = typename Ops::Map;
  const std::size_t m_size = corpus.exprs.size();
  BenchResult result;
  result.suite = std::string(suite);
  result.op_count = m_size;

  std::function<Rep()> rep;
  std::optional<Map> base;
  std::optional<Map> left, right;
  std::optional<Expr> fresh;

  auto needs_base = [&] {
    if (!base) base = Ops::build(corpus);
  };

  if (suite.starts_with("lookup") && suite != "lookup_one") {
    needs_base();
    rep = [&] {
      Rep r{0, 0};
      r.ns = timed([&] {
        std::int64_t hits = 0;
        for (const auto& e : corpus.exprs) {
          if (const Value* v = Ops::lookup(*base, e)) hits += *v;
        }
        r.check = hits;
        return hits;
      });
      return r;
    };
  } else if (suite == "lookup_one") {
    needs_base();
    result.op_count = 1;
    const Expr& key = corpus.exprs[m_size / 2];
    rep = [&] {
      Rep r{0, 0};
      r.ns = timed([&] {
        const Value* v = Ops::lookup(*base, key);
        r.check = v ? *v : -1;
        return r.check;
      });
      return r;
    };
  } else if (suite == "insert_lookup_one") {
    needs_base();
    result.op_count = 1;
    Rng rng(params.seed ^ 0x5eedULL);
    fresh = fresh_expr(corpus, rng);
    rep = [&] {
      Map working = *base;
      Rep r{0, 0};
      r.ns = timed([&] {
        r.check = Ops::insert_lookup(working, *fresh, static_cast<Value>(m_size));
        return r.check;
      });
      return r;
    };
  } else if (suite.starts_with("fromList")) {
    rep = [&] {
      Rep r{0, 0};
      std::optional<Map> built;
      r.ns = timed([&] {
        built = Ops::build(corpus);
        return static_cast<std::int64_t>(m_size);
      });
      r.check = static_cast<std::int64_t>(Ops::size(*built));
      return r;
    };
  } else if (suite == "union") {
    left = Ops::build_range(corpus, 0, m_size / 2);
    right = Ops::build_range(corpus, m_size / 2, m_size);
    rep = [&] {
      Rep r{0, 0};
      std::optional<Map> u;
      r.ns = timed([&] {
        u = Ops::unite(*left, *right);
        return std::int64_t{1};
      });
      r.check = Ops::sum(*u);
      return r;
    };
  } else if (suite == "fold") {
    needs_base();
    rep = [&] {
      Rep r{0, 0};
      r.ns = timed([&] {
        r.check = Ops::sum(*base);
        return r.check;
      });
      return r;
    };
  } else if (is_space_suite(suite)) {
    rep = [&] {
      Rep r{0, 0};
      r.ns = timed([&] {
        base = Ops::build(corpus);
        return std::int64_t{1};
      });
      r.check = static_cast<std::int64_t>(Ops::size(*base));
      return r;
    };
  } else {
    throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  }

  rep();  // warmup
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (int i = 0; i < params.reps; ++i) {
    Rep r = rep();
    best = std::min(best, r.ns);
    result.check = r.check;
  }
  result.total_ns = best;
  result.per_op_ns = static_cast<double>(best) / static_cast<double>(std::max<std::size_t>(result.op_count, 1));
  if (is_space_suite(suite)) result.node_count = Ops::census(*base);
  return result;
}

}  // namespace

const Corpus& Harness::corpus(PrefixKind kind) {
  auto it = corpora_.find(kind);
  if (it == corpora_.end()) {
    CorpusParams cp;
    cp.map_size = params_.map_size;
    cp.expr_size = params_.expr_size;
    cp.seed = params_.seed;
    cp.prefix = kind;
    cp.prefix_len = params_.prefix_len;
    it = corpora_.emplace(kind, make_corpus(cp)).first;
  }
  return it->second;
}

BenchResult Harness::run(std::string_view suite, Impl impl) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  }
  const Corpus& c = corpus(prefix_of(suite));
  BenchResult r;
  switch (impl) {
    case Impl::TM:
      r = run_with<TMOps>(suite, c, params_);
      break;
    case Impl::OM:
      r = run_with<OMOps>(suite, c, params_);
      break;
    case Impl::HM:
      r = run_with<HMOps>(suite, c, params_);
      break;
  }
  r.impl = impl;
  r.map_size = params_.map_size;
  r.expr_size = params_.expr_size;
  r.seed = params_.seed;
  r.reps = params_.reps;
  return r;
}

void write_csv_row(std::ostream& out, const BenchResult& r) {
  char per_op[64];
  std::snprintf(per_op, sizeof per_op, "%.1f", r.per_op_ns);
  out << r.suite << ',' << impl_name(r.impl) << ',' << r.map_size << ',' << r.expr_size << ',' << r.seed << ','
      << r.reps << ',' << r.total_ns << ',' << per_op << ',';
  if (r.node_count) out << *r.node_count;
  out << '\n';
}

}  // namespace triemap::bench
