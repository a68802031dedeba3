#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "triemap/bench.hpp"
#include "triemap/checks.hpp"
#include "triemap/expr.hpp"
#include "triemap/patmap.hpp"

namespace {

using namespace triemap;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct BenchOptions {
  std::string suite = "all";
  std::string impl = "all";
  std::size_t map_size = 10000;
  std::size_t expr_size = 100;
  std::uint64_t seed = 42;
  int reps = 5;
  std::size_t prefix_len = 100;
  std::string out;
};

int cmd_bench(const BenchOptions& opt) {
  std::vector<std::string> suites =
      opt.suite == "all" ? bench::suite_names() : std::vector<std::string>{opt.suite};
  std::vector<bench::Impl> impls;
  if (opt.impl == "all") {
    impls = {bench::Impl::TM, bench::Impl::OM, bench::Impl::HM};
  } else {
    impls = {bench::parse_impl(opt.impl)};
  }

  std::ofstream file;
  if (!opt.out.empty()) {
    file.open(opt.out);
    if (!file) {
      std::cerr << "error: cannot open " << opt.out << " for writing\n";
      return kUsage;
    }
  }
  std::ostream& out = opt.out.empty() ? std::cout : file;
  out << bench::kCsvHeader << '\n';

  bench::Harness harness(
      bench::BenchParams{opt.map_size, opt.expr_size, opt.seed, opt.reps, opt.prefix_len});
  bool agree = true;
  for (const auto& suite : suites) {
    std::vector<bench::BenchResult> rows;
    for (auto impl : impls) {
      rows.push_back(harness.run(suite, impl));
      bench::write_csv_row(out, rows.back());
      out.flush();
    }
    bool same = true;
    for (const auto& r : rows) same = same && r.check == rows.front().check;
    std::cerr << suite << ": check value";
    for (const auto& r : rows) std::cerr << ' ' << bench::impl_name(r.impl) << '=' << r.check;
    std::cerr << (same ? "" : "  MISMATCH") << '\n';
    agree = agree && same;
  }
  if (!agree) {
    std::cerr << "error: implementations disagree on functional output\n";
    return kFailure;
  }
  return kOk;
}

int cmd_selftest(std::size_t trials, std::uint64_t seed) {
  bench::Rng rng(seed);
  for (std::size_t i = 0; i < trials; ++i) {
    std::optional<std::string> bad = checks::law_trial(rng);
    if (!bad) bad = checks::exprmap_sequence_trial(rng, 30, 10);
    if (!bad) bad = checks::renaming_trial(rng);
    if (!bad) bad = checks::match_trial(rng, 8, 8);
    if (bad) {
      std::cout << "counterexample (trial " << i + 1 << " of " << trials << ", seed " << seed << "):\n"
                << *bad << '\n';
      std::cout << "selftest FAILED\n";
      return kFailure;
    }
  }
  std::cout << "selftest: " << trials << " trials passed (exprmap laws, oracle sequences, renaming, matching)\n";
  return kOk;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Rule {
  std::vector<VarName> vars;
  Expr body;
  std::string label;
};

struct FileError {
  std::string message;
};

std::vector<Rule> read_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError{path + ": cannot open pattern file"};
  std::vector<Rule> rules;
  std::map<std::string, std::size_t> labels;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::string where = path + ":" + std::to_string(lineno);
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto semi = line.find(';');
    auto arrow = line.rfind("=>");
    if (semi == std::string::npos || arrow == std::string::npos || arrow < semi) {
      throw FileError{where + ": expected 'VARS ; EXPR => LABEL'"};
    }
    Rule rule{{}, Expr::var(VarName("_")), trim(line.substr(arrow + 2))};
    std::istringstream vars(line.substr(0, semi));
    std::set<std::string> seen;
    for (std::string v; vars >> v;) {
      if (!VarName::is_valid(v)) throw FileError{where + ": invalid pattern variable '" + v + "'"};
      if (!seen.insert(v).second) throw FileError{where + ": pattern variable '" + v + "' listed twice"};
      rule.vars.emplace_back(v);
    }
    try {
      rule.body = parse_expr(std::string_view(line).substr(semi + 1, arrow - semi - 1));
    } catch (const ParseError& e) {
      throw FileError{where + ":" + std::to_string(semi + 1 + e.column()) + ": " + e.message()};
    }
    if (rule.label.empty()) throw FileError{where + ": empty label"};
    if (auto [it, fresh] = labels.emplace(rule.label, lineno); !fresh) {
      throw FileError{where + ": label '" + rule.label + "' already used on line " + std::to_string(it->second)};
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

int cmd_match(const std::string& pattern_file, const std::vector<std::string>& target_args) {
  std::vector<Rule> rules;
  std::vector<Expr> targets;
  try {
    rules = read_rules(pattern_file);
    if (target_args.empty()) {
      std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
      ExprReader reader(text);
      try {
        while (!reader.at_end()) targets.push_back(reader.read());
      } catch (const ParseError& e) {
        throw FileError{std::string("<stdin>:") + e.what()};
      }
    } else {
      for (std::size_t i = 0; i < target_args.size(); ++i) {
        try {
          targets.push_back(parse_expr(target_args[i]));
        } catch (const ParseError& e) {
          throw FileError{"target " + std::to_string(i + 1) + ":" + e.what()};
        }
      }
    }
  } catch (const FileError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kUsage;
  }

  PatMap<std::size_t> pm;
  for (std::size_t i = 0; i < rules.size(); ++i) pm = pm.insert(rules[i].vars, rules[i].body, i);

  for (const auto& target : targets) {
    auto results = pm.lookup(target);
    if (results.empty()) {
      std::cout << "no match\n";
      continue;
    }
    for (const auto& [subst, idx] : results) {
      std::cout << rules[idx].label << " {";
      for (std::size_t i = 0; i < subst.size(); ++i) {
        std::cout << (i ? ", " : " ") << subst[i].first.str() << '=' << print_expr(subst[i].second);
      }
      std::cout << (subst.empty() ? "}" : " }") << '\n';
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alpha-insensitive expression triemaps: benchmarks, self-test and pattern matching"};
  app.require_subcommand(1);

  BenchOptions bopt;
  auto* bench_cmd = app.add_subcommand("bench", "Run benchmark suites and print CSV");
  std::vector<std::string> suite_choices = bench::suite_names();
  suite_choices.push_back("all");
  bench_cmd->add_option("--suite", bopt.suite, "Suite name or 'all'")
      ->check(CLI::IsMember(suite_choices))
      ->capture_default_str();
  bench_cmd->add_option("--impl", bopt.impl, "tm, om, hm or all")
      ->check(CLI::IsMember({"tm", "om", "hm", "all"}, CLI::ignore_case))
      ->capture_default_str();
  bench_cmd->add_option("-M,--map-size", bopt.map_size, "Expressions per map")
      ->check(CLI::Range(std::size_t{2}, std::size_t{10000000}))
      ->capture_default_str();
  bench_cmd->add_option("-E,--expr-size", bopt.expr_size, "Target expression size")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
      ->capture_default_str();
  bench_cmd->add_option("--seed", bopt.seed, "Corpus seed")->capture_default_str();
  bench_cmd->add_option("--reps", bopt.reps, "Timed repetitions (minimum is reported)")
      ->check(CLI::Range(3, 1000))
      ->capture_default_str();
  bench_cmd->add_option("-P,--prefix-len", bopt.prefix_len, "Layers of shared prefix")->capture_default_str();
  bench_cmd->add_option("--out", bopt.out, "Write CSV here instead of standard output");

  std::size_t trials = 500;
  std::uint64_t selftest_seed = 1;
  auto* selftest_cmd = app.add_subcommand("selftest", "Differential checks against the naive oracles");
  selftest_cmd->add_option("--trials", trials, "Number of randomized trials")->capture_default_str();
  selftest_cmd->add_option("--seed", selftest_seed, "Random seed")->capture_default_str();

  std::string pattern_file;
  std::vector<std::string> targets;
  auto* match_cmd = app.add_subcommand("match", "Match target expressions against a pattern file");
  match_cmd->add_option("patterns", pattern_file, "Pattern file: 'VARS ; EXPR => LABEL' per line")->required();
  match_cmd->add_option("targets", targets, "Target expressions (default: read from standard input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (*bench_cmd) return cmd_bench(bopt);
    if (*selftest_cmd) return cmd_selftest(trials, selftest_seed);
    if (*match_cmd) return cmd_match(pattern_file, targets);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
