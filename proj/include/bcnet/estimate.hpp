#pragma once

#include "bcnet/counts.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bcnet {

// Dirichlet hyperparameters for one family: alpha_ijk on the child given each
// parent configuration, beta_ij on the parent configurations themselves.
struct PriorSpec {
  ProbArray child_alpha;  // q x c
  ProbVector parent_beta;  // q

  // alpha_ij = sum_k alpha_ijk
  ProbVector child_precision() const { return child_alpha.rowwise().sum(); }
  void validate() const;
};

// Per-cell hyperparameter values applied uniformly to every family.
struct PriorPolicy {
  double alpha = 1.0;
  double beta = 1.0;

  PriorSpec make(const ParentContext& ctx) const;
  PriorSpec make(std::int64_t num_configs, int child_card) const;
};

enum class PhiSource { kMar, kUniform, kUser };

// phi_ijk: probability that an incomplete case in configuration j completes to
// child state k. Each row lies on the simplex.
struct CompletionDistribution {
  ProbArray phi;
  PhiSource source = PhiSource::kMar;
};

CompletionDistribution phi_mar(const CountTable& t, const PriorSpec& prior);
CompletionDistribution phi_uniform(const ParentContext& ctx);
CompletionDistribution phi_uniform(std::int64_t num_configs, int child_card);
// Validates a user table (non-negative rows summing to 1 within 1e-9) and
// rescales each row onto the simplex.
CompletionDistribution phi_user(ProbArray phi);

struct BoundTable {
  ProbArray p_max;  // p*(x_ik | pi_ij)
  // p_lmin[l](j, k) = p_l.(x_ik | pi_ij): the estimate of state k when the
  // incomplete cases of configuration j all complete to state l.
  std::vector<ProbArray> p_lmin;
  ProbArray p_min;  // min over l of p_lmin
};

BoundTable bounds(const CountTable& t, const PriorSpec& prior);

// Collapsed estimate p_hat = sum_{l != k} phi_l p_l.(k) + phi_k p*(k).
ProbArray collapse(const CountTable& t, const PriorSpec& prior,
                   const CompletionDistribution& phi);
ProbArray collapse(const BoundTable& b, const CompletionDistribution& phi);

// Parent-level quantities used to spread parent-incomplete cases over the
// configurations.
ProbVector parent_phi_mar(const CountTable& t, const PriorSpec& prior);
ProbVector parent_probability(const CountTable& t, const PriorSpec& prior,
                              const ProbVector& parent_phi);

// alpha_hat_ij = alpha_ij + n(pi_ij) + p_hat(pi_ij) (n - sum_j n(pi_ij)).
// Uses the MAR parent-level phi unless one is supplied.
ProbVector precision(const CountTable& t, const PriorSpec& prior,
                     const std::optional<ProbVector>& parent_phi = std::nullopt);

struct BcCellEstimate {
  ProbArray p_hat;
  ProbArray p_max;
  ProbArray p_min;
  ProbVector alpha_hat;
};

BcCellEstimate estimate_family(
    const CountTable& t, const PriorSpec& prior,
    const CompletionDistribution& phi,
    const std::optional<ProbVector>& parent_phi = std::nullopt);

// Number of times a probability row drifted more than 1e-12 from the simplex
// and had to be rescaled. Stays at zero unless something is numerically off.
std::int64_t renormalization_count();

}  // namespace bcnet
