#include "bcnet/oracle.hpp"

#include "bcnet/score.hpp"

#include <cmath>
#include <limits>

namespace bcnet {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

namespace {

struct MissingEntry {
  std::int64_t offset;  // position in the row-major entry matrix
  int variable;
  int cardinality;
};

std::vector<MissingEntry> missing_entries(const Dataset& d) {
  std::vector<MissingEntry> out;
  const auto& e = d.entries();
  for (std::int64_t r = 0; r < d.num_cases(); ++r)
    for (int i = 0; i < d.num_variables(); ++i)
      if (is_missing(e(r, i)))
        out.push_back({r * d.num_variables() + i, i,
                       d.variable(i).cardinality()});
  return out;
}

// Calls f(entries, weight) for every completion; weights are normalized.
template <typename F>
void for_each_completion(const Dataset& d, const WeightPolicy& policy,
                         std::size_t cap, F&& f) {
  const std::uint64_t count = count_completions(d, cap);
  if (count > cap)
    throw ValidationError("oracle cap exceeded: more than " +
                          std::to_string(cap) + " completions");
  const auto holes = missing_entries(d);
  if (policy.kind == WeightPolicy::Kind::kProduct) {
    if (static_cast<int>(policy.per_variable.size()) != d.num_variables())
      throw ValidationError("product weights need one vector per variable");
    for (int i = 0; i < d.num_variables(); ++i)
      if (policy.per_variable[i].size() != d.variable(i).cardinality())
        throw ValidationError("product weight vector has the wrong length");
  }

  // The product weights of all completions sum to the product of the per-
  // entry totals; normalize by that.
  double norm = 1.0;
  if (policy.kind == WeightPolicy::Kind::kProduct)
    for (const auto& h : holes) norm *= policy.per_variable[h.variable].sum();
  const double uniform_weight = 1.0 / static_cast<double>(count);

  EntryMatrix entries = d.entries();
  std::vector<StateIndex> state(holes.size(), 0);
  for (std::size_t h = 0; h < holes.size(); ++h)
    entries.data()[holes[h].offset] = 0;
  while (true) {
    double w = uniform_weight;
    if (policy.kind == WeightPolicy::Kind::kProduct) {
      w = 1.0;
      for (std::size_t h = 0; h < holes.size(); ++h)
        w *= policy.per_variable[holes[h].variable](state[h]);
      w /= norm;
    }
    f(static_cast<const EntryMatrix&>(entries), w);
    std::size_t pos = holes.size();
    while (pos > 0) {
      const std::size_t h = pos - 1;
      if (++state[h] < holes[h].cardinality) {
        entries.data()[holes[h].offset] = state[h];
        break;
      }
      state[h] = 0;
      entries.data()[holes[h].offset] = 0;
      --pos;
    }
    if (pos == 0) return;
  }
}

}  // namespace

std::uint64_t count_completions(const Dataset& d, std::size_t cap) {
  std::uint64_t count = 1;
  for (const auto& h : missing_entries(d)) {
    count *= static_cast<std::uint64_t>(h.cardinality);
    if (count > cap) return static_cast<std::uint64_t>(cap) + 1;
  }
  return count;
}

CompletionEnumeration enumerate_datasets(const Dataset& d,
                                         const WeightPolicy& policy,
                                         std::size_t cap) {
  CompletionEnumeration out;
  for_each_completion(d, policy, cap, [&](const EntryMatrix& e, double w) {
    out.completions.push_back(d.with_entries(e));
    out.weights.push_back(w);
  });
  return out;
}

ProbArray exact_expectation(const Dataset& d, const ParentContext& ctx,
                            const PriorSpec& prior, const WeightPolicy& policy,
                            std::size_t cap) {
  const Eigen::Index q = ctx.num_configs();
  const int c = ctx.child_cardinality();
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(q * c));
  const ProbVector alpha = prior.child_precision();
  CountArray counts(q, c);
  std::vector<StateIndex> pstates(ctx.parents().size());

  for_each_completion(d, policy, cap, [&](const EntryMatrix& e, double w) {
    // Direct recount: this path deliberately avoids tally().
    counts.setZero();
    for (Eigen::Index r = 0; r < e.rows(); ++r) {
      for (std::size_t p = 0; p < pstates.size(); ++p)
        pstates[p] = e(r, ctx.parents()[p]);
      counts(ctx.encode(pstates), e(r, ctx.child())) += 1;
    }
    for (Eigen::Index j = 0; j < q; ++j) {
      const double denom = alpha(j) + static_cast<double>(counts.row(j).sum());
      for (int k = 0; k < c; ++k)
        acc[j * c + k].add(
            w * (prior.child_alpha(j, k) + static_cast<double>(counts(j, k))) /
            denom);
    }
  });

  ProbArray out(q, c);
  for (Eigen::Index j = 0; j < q; ++j)
    for (int k = 0; k < c; ++k) out(j, k) = acc[j * c + k].value();
  return out;
}

double exact_log_marginal(const Dataset& d, const Model& m,
                          const PriorPolicy& prior, const WeightPolicy& policy,
                          std::size_t cap) {
  validate_dag(m);
  check_model_matches(m, d);
  std::vector<ParentContext> ctx;
  std::vector<PriorSpec> priors;
  for (int i = 0; i < d.num_variables(); ++i) {
    ctx.emplace_back(d, i, m.parents[i]);
    priors.push_back(prior.make(ctx.back()));
  }
  std::vector<double> logs;
  std::vector<double> weights;
  for_each_completion(d, policy, cap, [&](const EntryMatrix& e, double w) {
    const Dataset dc = d.with_entries(e);
    double total = 0.0;
    for (int i = 0; i < d.num_variables(); ++i)
      total += log_g_exact(tally(dc, ctx[i]), priors[i]).log_g;
    logs.push_back(total);
    weights.push_back(w);
  });

  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < logs.size(); ++c)
    if (weights[c] > 0.0) top = std::max(top, logs[c]);
  CompensatedSum sum;
  for (std::size_t c = 0; c < logs.size(); ++c)
    if (weights[c] > 0.0) sum.add(weights[c] * std::exp(logs[c] - top));
  return top + std::log(sum.value());
}

}  // namespace bcnet
