#include "bcnet/counts.hpp"

#include <algorithm>
#include <limits>

namespace bcnet {

namespace {

// Dense tables are materialized per family; refuse absurd sizes up front.
constexpr std::int64_t kMaxCells = std::int64_t{1} << 28;

}  // namespace

ParentContext::ParentContext(const Dataset& d, int child,
                             std::vector<int> parents)
    : child_(child), parents_(std::move(parents)) {
  const auto cards = d.cardinalities();
  init(cards);
}

ParentContext::ParentContext(std::span<const int> cardinalities, int child,
                             std::vector<int> parents)
    : child_(child), parents_(std::move(parents)) {
  init(cardinalities);
}

void ParentContext::init(std::span<const int> cards) {
  const int nvars = static_cast<int>(cards.size());
  if (child_ < 0 || child_ >= nvars)
    throw ValidationError("child index out of range");
  std::vector<int> seen(parents_);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw ValidationError("parent indices must be distinct");
  child_card_ = cards[child_];
  parent_cards_.clear();
  for (int p : parents_) {
    if (p < 0 || p >= nvars) throw ValidationError("parent index out of range");
    if (p == child_) throw ValidationError("a variable cannot be its own parent");
    parent_cards_.push_back(cards[p]);
  }
  strides_.assign(parents_.size(), 1);
  num_configs_ = 1;
  for (std::size_t d = parents_.size(); d-- > 0;) {
    strides_[d] = num_configs_;
    num_configs_ *= parent_cards_[d];
    if (num_configs_ * child_card_ > kMaxCells)
      throw ValidationError("parent set too large: table would exceed " +
                            std::to_string(kMaxCells) + " cells");
  }
}

std::int64_t ParentContext::encode(
    std::span<const StateIndex> parent_states) const {
  std::int64_t j = 0;
  for (std::size_t d = 0; d < parents_.size(); ++d)
    j += strides_[d] * parent_states[d];
  return j;
}

std::vector<StateIndex> ParentContext::decode(std::int64_t config) const {
  std::vector<StateIndex> out(parents_.size());
  for (std::size_t d = 0; d < parents_.size(); ++d) {
    out[d] = static_cast<StateIndex>(config / strides_[d]);
    config %= strides_[d];
  }
  return out;
}

std::string ParentContext::config_label(const std::vector<Variable>& vars,
                                        std::int64_t config) const {
  if (parents_.empty()) return "()";
  const auto states = decode(config);
  std::string label;
  for (std::size_t i = 0; i < parents_.size(); ++i) {
    const auto& v = vars[parents_[i]];
    if (i) label += ',';
    label += v.name + '=' + v.states[states[i]];
  }
  return label;
}

DiscriminationTree::DiscriminationTree(std::vector<int> parent_cardinalities,
                                       int child_card)
    : parent_cards_(std::move(parent_cardinalities)), child_card_(child_card) {}

void DiscriminationTree::insert(std::span<const StateIndex> parent_states,
                                StateIndex child_state, std::int64_t weight) {
  const std::size_t depth = parent_cards_.size();
  auto new_block = [&](std::size_t level) -> std::int32_t {
    if (level == depth) {
      const auto off = static_cast<std::int32_t>(leaves_.size());
      leaves_.resize(leaves_.size() + child_card_ + 1, 0);
      return off;
    }
    const auto off = static_cast<std::int32_t>(inner_.size());
    inner_.resize(inner_.size() + parent_cards_[level] + 1, -1);
    return off;
  };
  if (leaves_.empty() && inner_.empty()) new_block(0);

  std::int32_t offset = 0;
  for (std::size_t d = 0; d < depth; ++d) {
    const StateIndex s = parent_states[d];
    const std::int32_t slot =
        offset + (is_missing(s) ? parent_cards_[d] : static_cast<int>(s));
    if (inner_[slot] < 0) {
      const std::int32_t created = new_block(d + 1);
      inner_[slot] = created;
    }
    offset = inner_[slot];
  }
  leaves_[offset + (is_missing(child_state) ? child_card_ : child_state)] +=
      weight;
}

namespace {

// Calls f(j) for every configuration consistent with a partially observed
// parent vector.
template <typename F>
void for_each_consistent_config(const ParentContext& ctx,
                                std::span<const StateIndex> path, F&& f) {
  const auto& cards = ctx.parent_cardinalities();
  std::vector<StateIndex> cur(path.begin(), path.end());
  std::vector<std::size_t> free;
  for (std::size_t d = 0; d < path.size(); ++d) {
    if (is_missing(path[d])) {
      free.push_back(d);
      cur[d] = 0;
    }
  }
  while (true) {
    f(ctx.encode(cur));
    std::size_t pos = free.size();
    while (pos > 0) {
      const std::size_t d = free[pos - 1];
      if (++cur[d] < cards[d]) break;
      cur[d] = 0;
      --pos;
    }
    if (pos == 0) return;
  }
}

}  // namespace

CountTable tally(const Dataset& d, const ParentContext& ctx) {
  const int c = ctx.child_cardinality();
  const std::int64_t q = ctx.num_configs();
  CountTable t;
  t.obs = CountArray::Zero(q, c);
  t.comp = CountArray::Zero(q, c);
  t.parent_obs = CountVector::Zero(q);
  t.parent_comp = CountVector::Zero(q);
  t.n_total = d.num_cases();

  DiscriminationTree tree(ctx.parent_cardinalities(), c);
  const auto& parents = ctx.parents();
  std::vector<StateIndex> pstates(parents.size());
  const auto& patterns = d.patterns();
  for (Eigen::Index r = 0; r < patterns.rows.rows(); ++r) {
    for (std::size_t p = 0; p < parents.size(); ++p)
      pstates[p] = patterns.rows(r, parents[p]);
    tree.insert(pstates, patterns.rows(r, ctx.child()),
                patterns.weights[static_cast<std::size_t>(r)]);
  }

  tree.for_each_leaf([&](std::span<const StateIndex> path,
                         std::span<const std::int64_t> counts) {
    const auto observed = Eigen::Map<const CountVector>(counts.data(), c);
    const std::int64_t child_missing = counts[c];
    const std::int64_t total = observed.sum() + child_missing;
    const bool parents_complete =
        std::none_of(path.begin(), path.end(), is_missing);
    if (parents_complete) {
      const std::int64_t j = ctx.encode(path);
      t.obs.row(j) += observed.transpose();
      t.parent_obs(j) += total;
      t.comp.row(j) += child_missing;
      t.incomplete_cases += child_missing;
      return;
    }
    t.incomplete_cases += total;
    t.parent_incomplete_cases += total;
    for_each_consistent_config(ctx, path, [&](std::int64_t j) {
      t.parent_comp(j) += total;
      t.comp.row(j) += observed.transpose() + child_missing;
    });
  });
  return t;
}

std::vector<CompletionCell> enumerate_completions(
    std::span<const StateIndex> row, const ParentContext& ctx) {
  const auto& parents = ctx.parents();
  std::vector<StateIndex> pstates(parents.size());
  for (std::size_t p = 0; p < parents.size(); ++p)
    pstates[p] = row[parents[p]];
  const StateIndex child = row[ctx.child()];

  std::vector<CompletionCell> cells;
  for_each_consistent_config(ctx, pstates, [&](std::int64_t j) {
    if (is_missing(child)) {
      for (StateIndex k = 0; k < ctx.child_cardinality(); ++k)
        cells.push_back({j, k});
    } else {
      cells.push_back({j, child});
    }
  });
  return cells;
}

}  // namespace bcnet
