#include "bcnet/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bcnet {

void OrderConstraint::validate(int num_variables) const {
  if (static_cast<int>(order.size()) != num_variables)
    throw ValidationError("order must list every variable exactly once");
  std::vector<bool> seen(num_variables, false);
  for (int v : order) {
    if (v < 0 || v >= num_variables || seen[v])
      throw ValidationError("order is not a permutation of the variables");
    seen[v] = true;
  }
  if (max_parents && *max_parents < 0)
    throw ValidationError("max_parents must be non-negative");
}

OrderConstraint OrderConstraint::identity(int num_variables) {
  OrderConstraint o;
  for (int i = 0; i < num_variables; ++i) o.order.push_back(i);
  return o;
}

OrderConstraint OrderConstraint::parse(const Dataset& d,
                                       const std::string& names) {
  OrderConstraint o;
  std::stringstream ss(names);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto first = name.find_first_not_of(' ');
    const auto last = name.find_last_not_of(' ');
    name = first == std::string::npos ? "" : name.substr(first, last - first + 1);
    const int idx = d.find_variable(name);
    if (idx < 0) throw ValidationError("order names unknown variable '" + name + "'");
    o.order.push_back(idx);
  }
  o.validate(d.num_variables());
  return o;
}

namespace {

FamilyScore family_score(const Dataset& d, int child,
                         const std::vector<int>& parents,
                         const SearchOptions& opts, FamilyScoreCache& cache) {
  if (opts.use_cache) return cache.get_or_compute(d, child, parents, opts.score);
  std::vector<int> sorted = parents;
  std::sort(sorted.begin(), sorted.end());
  return score_family(d, ParentContext(d, child, sorted), opts.score);
}

}  // namespace

Model k2_bc(const Dataset& d, const OrderConstraint& order,
            const SearchOptions& opts, std::vector<K2Step>* trace) {
  order.validate(d.num_variables());
  FamilyScoreCache cache;
  Model m = Model::empty(d.variables());

  for (std::size_t pos = 0; pos < order.order.size(); ++pos) {
    const int node = order.order[pos];
    std::vector<int> chosen;
    double current = family_score(d, node, chosen, opts, cache).log_g;
    while (!order.max_parents ||
           static_cast<int>(chosen.size()) < *order.max_parents) {
      // Gather every candidate's score before choosing, so the outcome does
      // not depend on evaluation order.
      std::vector<std::pair<int, double>> candidates;
      for (std::size_t p = 0; p < pos; ++p) {
        const int cand = order.order[p];
        if (std::find(chosen.begin(), chosen.end(), cand) != chosen.end())
          continue;
        std::vector<int> trial = chosen;
        trial.push_back(cand);
        candidates.emplace_back(cand,
                                family_score(d, node, trial, opts, cache).log_g);
      }
      int best = -1;
      double best_score = -std::numeric_limits<double>::infinity();
      for (const auto& [cand, s] : candidates) {
        if (s > best_score) {
          best = cand;
          best_score = s;
        }
      }
      if (best < 0 || !(best_score > current)) break;
      if (trace) trace->push_back({node, best, current, best_score});
      chosen.push_back(best);
      current = best_score;
    }
    std::sort(chosen.begin(), chosen.end());
    m.parents[node] = std::move(chosen);
  }

  m.score = log_marginal(m, d, opts.score, opts.use_cache ? &cache : nullptr);
  m.cpts = fit_cpts(m, d, opts.score);
  return m;
}

std::vector<ProbArray> fit_cpts(const Model& m, const Dataset& d,
                                const ScoreOptions& opts) {
  validate_dag(m);
  check_model_matches(m, d);
  std::vector<ProbArray> cpts;
  for (int i = 0; i < d.num_variables(); ++i) {
    const ParentContext ctx(d, i, m.parents[i]);
    const CountTable t = tally(d, ctx);
    const PriorSpec prior = opts.prior.make(ctx);
    cpts.push_back(collapse(t, prior, opts.phi.make(d, ctx, t, prior)));
  }
  return cpts;
}

double count_consistent_models(const OrderConstraint& order) {
  double total = 1.0;
  for (std::size_t pos = 0; pos < order.order.size(); ++pos) {
    // Number of subsets of the pos predecessors within the size cap.
    const std::size_t cap =
        order.max_parents ? std::min<std::size_t>(*order.max_parents, pos) : pos;
    double subsets = 0.0;
    double binom = 1.0;
    for (std::size_t k = 0; k <= cap; ++k) {
      subsets += binom;
      binom = binom * static_cast<double>(pos - k) / static_cast<double>(k + 1);
    }
    total *= subsets;
  }
  return total;
}

std::vector<ScoredModel> enumerate_models(const Dataset& d,
                                          const OrderConstraint& order,
                                          const ScoreOptions& opts,
                                          std::size_t cap) {
  order.validate(d.num_variables());
  const double count = count_consistent_models(order);
  if (count > static_cast<double>(cap))
    throw ValidationError("model enumeration cap exceeded: " +
                          std::to_string(static_cast<long long>(count)) +
                          " models > " + std::to_string(cap));

  // Candidate parent sets per node, as sorted index lists.
  const int nvars = d.num_variables();
  std::vector<std::vector<std::vector<int>>> options(nvars);
  for (std::size_t pos = 0; pos < order.order.size(); ++pos) {
    const int node = order.order[pos];
    const std::size_t npred = pos;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << npred); ++mask) {
      std::vector<int> ps;
      for (std::size_t b = 0; b < npred; ++b)
        if (mask & (std::uint64_t{1} << b)) ps.push_back(order.order[b]);
      if (order.max_parents && static_cast<int>(ps.size()) > *order.max_parents)
        continue;
      std::sort(ps.begin(), ps.end());
      options[node].push_back(std::move(ps));
    }
  }

  FamilyScoreCache cache;
  std::vector<ScoredModel> out;
  std::vector<std::size_t> pick(nvars, 0);
  while (true) {
    Model m = Model::empty(d.variables());
    for (int i = 0; i < nvars; ++i) m.parents[i] = options[i][pick[i]];
    ScoredModel sm;
    sm.log_marginal = log_marginal(m, d, opts, &cache).total_log_marginal;
    sm.model = std::move(m);
    out.push_back(std::move(sm));
    int i = nvars - 1;
    while (i >= 0 && ++pick[i] == options[i].size()) pick[i--] = 0;
    if (i < 0) break;
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredModel& a, const ScoredModel& b) {
                     return a.log_marginal > b.log_marginal;
                   });
  const double top = out.front().log_marginal;
  double norm = 0.0;
  for (const auto& sm : out) norm += std::exp(sm.log_marginal - top);
  for (auto& sm : out) sm.posterior = std::exp(sm.log_marginal - top) / norm;
  return out;
}

}  // namespace bcnet
