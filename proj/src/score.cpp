#include "bcnet/score.hpp"

#include <algorithm>
#include <cmath>

namespace bcnet {

double log_gamma(double x) { return std::lgamma(x); }

CompletionDistribution PhiPolicy::make(const Dataset& d,
                                       const ParentContext& ctx,
                                       const CountTable& t,
                                       const PriorSpec& prior) const {
  switch (kind) {
    case PhiSource::kUniform:
      return phi_uniform(ctx);
    case PhiSource::kMar:
      return phi_mar(t, prior);
    case PhiSource::kUser:
      break;
  }
  CompletionDistribution out = phi_mar(t, prior);
  out.source = PhiSource::kUser;
  auto child_it = user.find(d.variable(ctx.child()).name);
  if (child_it == user.end()) child_it = user.find("*");
  if (child_it == user.end()) return out;
  const auto& table = child_it->second;
  const auto fallback = table.find("*");
  for (std::int64_t j = 0; j < ctx.num_configs(); ++j) {
    auto it = table.find(ctx.config_label(d, j));
    if (it == table.end()) it = fallback;
    if (it == table.end()) continue;
    if (static_cast<int>(it->second.size()) != ctx.child_cardinality())
      throw ValidationError("phi vector for '" + it->first +
                            "' has the wrong length");
    for (int k = 0; k < ctx.child_cardinality(); ++k)
      out.phi(j, k) = it->second[k];
  }
  out.phi = phi_user(std::move(out.phi)).phi;
  return out;
}

FamilyScore log_g_exact(const CountTable& t, const PriorSpec& prior) {
  if (!t.complete())
    throw ValidationError("exact score requires complete family data");
  const ProbVector alpha = prior.child_precision();
  const ProbArray n = t.obs.cast<double>();
  const ProbVector row_n = n.rowwise().sum();
  double total = 0.0;
  for (Eigen::Index j = 0; j < n.rows(); ++j) {
    total += log_gamma(alpha(j)) - log_gamma(alpha(j) + row_n(j));
    for (Eigen::Index k = 0; k < n.cols(); ++k)
      total += log_gamma(prior.child_alpha(j, k) + n(j, k)) -
               log_gamma(prior.child_alpha(j, k));
  }
  return {0, {}, total, true};
}

FamilyScore log_g_bc(const BcCellEstimate& e, const PriorSpec& prior,
                     bool exact) {
  const ProbVector alpha = prior.child_precision();
  double total = 0.0;
  for (Eigen::Index j = 0; j < e.p_hat.rows(); ++j) {
    total += log_gamma(alpha(j)) - log_gamma(e.alpha_hat(j));
    for (Eigen::Index k = 0; k < e.p_hat.cols(); ++k)
      total += log_gamma(e.alpha_hat(j) * e.p_hat(j, k)) -
               log_gamma(prior.child_alpha(j, k));
  }
  if (!std::isfinite(total))
    throw InvariantError("non-finite estimated family score");
  return {0, {}, total, exact};
}

FamilyScore log_g_bc(const CountTable& t, const PriorSpec& prior,
                     const CompletionDistribution& phi,
                     const std::optional<ProbVector>& parent_phi) {
  return log_g_bc(estimate_family(t, prior, phi, parent_phi), prior,
                  t.complete());
}

FamilyScore score_family(const Dataset& d, const ParentContext& ctx,
                         const ScoreOptions& opts) {
  const CountTable t = tally(d, ctx);
  const PriorSpec prior = opts.prior.make(ctx);
  FamilyScore s = log_g_bc(t, prior, opts.phi.make(d, ctx, t, prior));
  s.child = ctx.child();
  s.parents = ctx.parents();
  return s;
}

FamilyScore FamilyScoreCache::get_or_compute(const Dataset& d, int child,
                                             std::vector<int> parents,
                                             const ScoreOptions& opts) {
  std::sort(parents.begin(), parents.end());
  auto key = std::make_pair(child, parents);
  {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  FamilyScore s = score_family(d, ParentContext(d, child, parents), opts);
  std::lock_guard lock(mu_);
  entries_.emplace(std::move(key), s);
  return s;
}

std::size_t FamilyScoreCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::size_t FamilyScoreCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

void check_model_matches(const Model& m, const Dataset& d) {
  if (m.num_variables() != d.num_variables())
    throw ValidationError("model and dataset have different variable counts");
  for (int i = 0; i < d.num_variables(); ++i) {
    if (m.variables[i].name != d.variable(i).name ||
        m.variables[i].states != d.variable(i).states)
      throw ValidationError("model variable '" + m.variables[i].name +
                            "' does not match the dataset");
  }
}

ModelScore log_marginal(const Model& m, const Dataset& d,
                        const ScoreOptions& opts, FamilyScoreCache* cache) {
  validate_dag(m);
  check_model_matches(m, d);
  ModelScore out;
  for (int i = 0; i < d.num_variables(); ++i) {
    FamilyScore s =
        cache ? cache->get_or_compute(d, i, m.parents[i], opts)
              : score_family(d, ParentContext(d, i, m.parents[i]), opts);
    out.total_log_marginal += s.log_g;
    out.families.push_back(std::move(s));
  }
  return out;
}

double bayes_factor(const Model& m1, const Model& m2, const Dataset& d,
                    const ScoreOptions& opts) {
  return log_marginal(m1, d, opts).total_log_marginal -
         log_marginal(m2, d, opts).total_log_marginal;
}

}  // namespace bcnet
