#pragma once

#include "bcnet/counts.hpp"
#include "bcnet/estimate.hpp"
#include "bcnet/model.hpp"

#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace bcnet {

double log_gamma(double x);

// How completion probabilities are chosen for each family.
struct PhiPolicy {
  PhiSource kind = PhiSource::kMar;
  // For kUser: child name -> parent configuration label -> distribution. The
  // label "*" is a per-child default and the child "*" covers every child not
  // listed; anything not listed falls back to MAR.
  std::map<std::string, std::map<std::string, std::vector<double>>> user;

  CompletionDistribution make(const Dataset& d, const ParentContext& ctx,
                              const CountTable& t,
                              const PriorSpec& prior) const;
};

struct ScoreOptions {
  PriorPolicy prior;
  PhiPolicy phi;
};

// Complete-data local score; throws ValidationError when any case is missing
// an entry of the family.
FamilyScore log_g_exact(const CountTable& t, const PriorSpec& prior);

// Local score from the moment-matched Dirichlet D(alpha_hat p_hat).
FamilyScore log_g_bc(const CountTable& t, const PriorSpec& prior,
                     const CompletionDistribution& phi,
                     const std::optional<ProbVector>& parent_phi = std::nullopt);
FamilyScore log_g_bc(const BcCellEstimate& e, const PriorSpec& prior,
                     bool exact);

FamilyScore score_family(const Dataset& d, const ParentContext& ctx,
                         const ScoreOptions& opts);

// Memo of family scores keyed by (child, sorted parent set). Safe for
// concurrent use; racing inserts of the same key store identical values.
class FamilyScoreCache {
 public:
  FamilyScore get_or_compute(const Dataset& d, int child,
                             std::vector<int> parents,
                             const ScoreOptions& opts);
  std::size_t size() const;
  std::size_t hits() const;

 private:
  mutable std::mutex mu_;
  std::map<std::pair<int, std::vector<int>>, FamilyScore> entries_;
  std::size_t hits_ = 0;
};

ModelScore log_marginal(const Model& m, const Dataset& d,
                        const ScoreOptions& opts,
                        FamilyScoreCache* cache = nullptr);

// log p(D | m1) - log p(D | m2).
double bayes_factor(const Model& m1, const Model& m2, const Dataset& d,
                    const ScoreOptions& opts);

// Checks that the model's variables match the dataset's, by name and states.
void check_model_matches(const Model& m, const Dataset& d);

}  // namespace bcnet
