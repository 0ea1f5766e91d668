#pragma once

#include "bcnet/data.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bcnet {

// A child variable together with an ordered parent set. Parent configurations
// are numbered in mixed radix with the last parent varying fastest, so for
// parents (X1, X2) over binary states the order is (1,1), (1,2), (2,1), (2,2).
class ParentContext {
 public:
  ParentContext(const Dataset& d, int child, std::vector<int> parents);
  ParentContext(std::span<const int> cardinalities, int child,
                std::vector<int> parents);

  int child() const { return child_; }
  const std::vector<int>& parents() const { return parents_; }
  int child_cardinality() const { return child_card_; }
  const std::vector<int>& parent_cardinalities() const { return parent_cards_; }
  // q_i; 1 for the empty parent set.
  std::int64_t num_configs() const { return num_configs_; }

  std::int64_t encode(std::span<const StateIndex> parent_states) const;
  std::vector<StateIndex> decode(std::int64_t config) const;

  // "X1=a,X2=b" using state labels; "()" for the empty parent set.
  std::string config_label(const std::vector<Variable>& vars,
                           std::int64_t config) const;
  std::string config_label(const Dataset& d, std::int64_t config) const {
    return config_label(d.variables(), config);
  }

 private:
  void init(std::span<const int> cardinalities);

  int child_;
  std::vector<int> parents_;
  int child_card_ = 0;
  std::vector<int> parent_cards_;
  std::vector<std::int64_t> strides_;
  std::int64_t num_configs_ = 1;
};

// Sparse counter store keyed on parent state vectors. Each level branches on a
// parent's state or on "missing"; leaves hold c_i + 1 counters (the last one
// counts cases whose child entry is missing). Nodes exist only for patterns
// that occur in the data, so the cost of tracking completions depends on the
// number of distinct missingness patterns rather than on n.
class DiscriminationTree {
 public:
  DiscriminationTree(std::vector<int> parent_cardinalities, int child_card);

  void insert(std::span<const StateIndex> parent_states, StateIndex child_state,
              std::int64_t weight = 1);

  // Calls f(path, counts) for every allocated leaf, in lexicographic path
  // order (missing sorts last at each level).
  template <typename F>
  void for_each_leaf(F&& f) const {
    if (leaves_.empty()) return;
    std::vector<StateIndex> path(parent_cards_.size());
    visit(0, 0, path, f);
  }

  std::size_t num_leaves() const { return leaves_.size() / (child_card_ + 1); }

 private:
  template <typename F>
  void visit(std::size_t depth, std::int32_t offset,
             std::vector<StateIndex>& path, F& f) const {
    if (depth == parent_cards_.size()) {
      f(std::span<const StateIndex>(path),
        std::span<const std::int64_t>(leaves_.data() + offset,
                                      child_card_ + 1));
      return;
    }
    const int width = parent_cards_[depth] + 1;
    for (int slot = 0; slot < width; ++slot) {
      const std::int32_t next = inner_[offset + slot];
      if (next < 0) continue;
      path[depth] = slot == width - 1 ? kMissing : slot;
      visit(depth + 1, next, path, f);
    }
  }

  std::vector<int> parent_cards_;
  int child_card_;
  std::vector<std::int32_t> inner_;
  std::vector<std::int64_t> leaves_;
};

// Observed and completion counts for one family.
struct CountTable {
  // n(x_ik | pi_ij): cases observed on the child and on every parent.
  CountArray obs;
  // n*(x_ik | pi_ij): incomplete cases that can be completed to (j, k).
  CountArray comp;
  // n(pi_ij): cases observed on every parent (the child may be missing).
  CountVector parent_obs;
  // n.(pi_ij): cases missing >= 1 parent whose observed parents agree with j.
  CountVector parent_comp;
  std::int64_t n_total = 0;
  // Cases with >= 1 missing entry among child and parents.
  std::int64_t incomplete_cases = 0;
  // Cases with >= 1 missing parent entry.
  std::int64_t parent_incomplete_cases = 0;

  std::int64_t num_configs() const { return obs.rows(); }
  int child_cardinality() const { return static_cast<int>(obs.cols()); }
  bool complete() const { return incomplete_cases == 0; }
};

CountTable tally(const Dataset& d, const ParentContext& ctx);

struct CompletionCell {
  std::int64_t config;
  StateIndex state;
  friend bool operator==(const CompletionCell&, const CompletionCell&) = default;
};

// Every (j, k) cell a case is consistent with, ordered by j then k. `row` is a
// full case over all dataset variables; entries outside the family are ignored.
std::vector<CompletionCell> enumerate_completions(
    std::span<const StateIndex> row, const ParentContext& ctx);

}  // namespace bcnet
