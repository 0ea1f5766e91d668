#pragma once

#include "bcnet/data.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bcnet {

struct FamilyScore {
  int child = 0;
  std::vector<int> parents;
  // Natural log of the (estimated) local score.
  double log_g = 0.0;
  // True iff no case is missing an entry of this family.
  bool exact = true;
};

struct ModelScore {
  std::vector<FamilyScore> families;
  double total_log_marginal = 0.0;
};

// A DAG over the dataset's variables. Parent sets are kept sorted by variable
// index so that equal structures compare and score identically.
struct Model {
  std::vector<Variable> variables;
  std::vector<std::vector<int>> parents;
  // cpts[i](j, k) = p(X_i = k | configuration j of parents[i]).
  std::optional<std::vector<ProbArray>> cpts;
  std::optional<ModelScore> score;

  static Model empty(const std::vector<Variable>& variables);
  static Model from_arcs(const std::vector<Variable>& variables,
                         const std::vector<std::pair<int, int>>& arcs);

  int num_variables() const { return static_cast<int>(variables.size()); }
  // (parent, child) pairs ordered by child then parent.
  std::vector<std::pair<int, int>> arcs() const;
  std::size_t num_arcs() const;
  bool same_structure(const Model& other) const {
    return parents == other.parents;
  }
};

// Throws ValidationError when parent sets are malformed or the graph has a
// cycle.
void validate_dag(const Model& m);
bool is_acyclic(const Model& m);
std::vector<int> topological_order(const Model& m);

// Size of the symmetric difference of the two arc sets.
std::size_t arc_difference(const Model& a, const Model& b);

std::string describe_arcs(const Model& m);

}  // namespace bcnet
