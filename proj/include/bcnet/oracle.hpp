#pragma once

#include "bcnet/counts.hpp"
#include "bcnet/estimate.hpp"
#include "bcnet/model.hpp"

#include <cstdint>
#include <vector>

namespace bcnet {

// Exhaustive ground truth over every completion of a tiny incomplete dataset.
// Only meant for desk-scale inputs used by tests and `--oracle`.

inline constexpr std::size_t kDefaultOracleCap = 4096;

// How completions are weighted: uniformly, or by the product over missing
// entries of a per-variable distribution on that entry's state.
struct WeightPolicy {
  enum class Kind { kUniform, kProduct };
  Kind kind = Kind::kUniform;
  std::vector<ProbVector> per_variable;

  static WeightPolicy uniform() { return {}; }
  static WeightPolicy product(std::vector<ProbVector> per_variable) {
    return {Kind::kProduct, std::move(per_variable)};
  }
};

struct CompletionEnumeration {
  std::vector<Dataset> completions;
  std::vector<double> weights;  // sums to 1
};

// Number of completions, or cap + 1 once it exceeds the cap.
std::uint64_t count_completions(const Dataset& d, std::size_t cap);

CompletionEnumeration enumerate_datasets(
    const Dataset& d, const WeightPolicy& policy = WeightPolicy::uniform(),
    std::size_t cap = kDefaultOracleCap);

// sum_c w_c E(theta_ijk | D_c), the completion-weighted posterior mean.
ProbArray exact_expectation(const Dataset& d, const ParentContext& ctx,
                            const PriorSpec& prior,
                            const WeightPolicy& policy = WeightPolicy::uniform(),
                            std::size_t cap = kDefaultOracleCap);

// log sum_c w_c p(D_c | m) with the complete-data marginal likelihood.
double exact_log_marginal(const Dataset& d, const Model& m,
                          const PriorPolicy& prior,
                          const WeightPolicy& policy = WeightPolicy::uniform(),
                          std::size_t cap = kDefaultOracleCap);

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace bcnet
