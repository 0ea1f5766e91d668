#pragma once

#include "bcnet/score.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bcnet {

// A total order over the variables: only variables earlier in the order may
// become parents of later ones.
struct OrderConstraint {
  std::vector<int> order;
  std::optional<int> max_parents;

  void validate(int num_variables) const;
  static OrderConstraint identity(int num_variables);
  // Parses comma separated variable names.
  static OrderConstraint parse(const Dataset& d, const std::string& names);
};

struct SearchOptions {
  ScoreOptions score;
  bool use_cache = true;
};

// One accepted parent addition of the greedy search.
struct K2Step {
  int child = 0;
  int added_parent = 0;
  double log_g_before = 0.0;
  double log_g_after = 0.0;
};

// Greedy order-constrained search: each node starts with no parents and
// repeatedly adopts the single predecessor that most increases its estimated
// local score, stopping when no candidate strictly improves it (ties go to the
// candidate earliest in the order). The returned model carries its score and
// collapsed CPTs.
Model k2_bc(const Dataset& d, const OrderConstraint& order,
            const SearchOptions& opts = {},
            std::vector<K2Step>* trace = nullptr);

// Collapsed estimates p_hat for every family of m.
std::vector<ProbArray> fit_cpts(const Model& m, const Dataset& d,
                                const ScoreOptions& opts);

struct ScoredModel {
  Model model;
  double log_marginal = 0.0;
  double posterior = 0.0;
};

// Number of parent-set assignments consistent with the order (and cap).
double count_consistent_models(const OrderConstraint& order);

// Every model consistent with the order, scored, sorted by decreasing score,
// with posteriors under a uniform model prior.
std::vector<ScoredModel> enumerate_models(const Dataset& d,
                                          const OrderConstraint& order,
                                          const ScoreOptions& opts = {},
                                          std::size_t cap = 1024);

}  // namespace bcnet
