#pragma once

// Randomized differential checks of the maps against the oracles. Each trial
// returns a description of the first disagreement, or nothing.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "triemap/bench.hpp"
#include "triemap/expr.hpp"

namespace triemap::checks {

using bench::Rng;

// Small keys over a tiny name pool so that shadowing, bound/free overlap and
// key collisions are common.
Expr random_key(Rng& rng, std::size_t max_size);

// Renames every lambda binder to a fresh name. The result is alpha-equal to e.
Expr rename_binders(const Expr& e, Rng& rng);

struct RandomPattern {
  std::vector<VarName> vars;
  Expr body;
};

// Up to 3 quantified variables, body of at most max_size constructors.
RandomPattern random_pattern(Rng& rng, std::size_t max_size);

// Either a random expression or an instance of one of the patterns.
Expr random_target(Rng& rng, const std::vector<RandomPattern>& patterns);

// Laws 1-3 on a random ExprMap, a random ListMap over ExprMap, and a random
// SEMap shape (0, 1 or many entries).
std::optional<std::string> law_trial(Rng& rng);

// A random alter/delete/lookup sequence against the association-list map.
std::optional<std::string> exprmap_sequence_trial(Rng& rng, std::size_t ops, std::size_t max_key_size);

// Lookup of a key and of a binder-renamed copy agree.
std::optional<std::string> renaming_trial(Rng& rng);

// One PatMap holding n_patterns random patterns, queried with n_targets
// targets, against the naive store.
std::optional<std::string> match_trial(Rng& rng, std::size_t n_patterns, std::size_t n_targets);

}  // namespace triemap::checks
