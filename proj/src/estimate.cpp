#include "bcnet/estimate.hpp"

#include <atomic>
#include <cmath>

namespace bcnet {

namespace {

constexpr double kSimplexTolerance = 1e-12;

std::atomic<std::int64_t> g_renormalizations{0};

template <typename Derived>
void enforce_simplex_rows(Eigen::ArrayBase<Derived>& rows) {
  for (Eigen::Index j = 0; j < rows.rows(); ++j) {
    const double s = rows.row(j).sum();
    if (std::abs(s - 1.0) > kSimplexTolerance) {
      rows.row(j) /= s;
      g_renormalizations.fetch_add(1, std::memory_order_relaxed);
    }
  }
}

void check_shape(const CountTable& t, const PriorSpec& prior) {
  if (prior.child_alpha.rows() != t.num_configs() ||
      prior.child_alpha.cols() != t.child_cardinality() ||
      prior.parent_beta.size() != t.num_configs())
    throw ValidationError("prior shape does not match the count table");
}

}  // namespace

void PriorSpec::validate() const {
  if (!(child_alpha > 0.0).all() || !(parent_beta > 0.0).all())
    throw ValidationError("prior hyperparameters must be strictly positive");
}

PriorSpec PriorPolicy::make(const ParentContext& ctx) const {
  return make(ctx.num_configs(), ctx.child_cardinality());
}

PriorSpec PriorPolicy::make(std::int64_t num_configs, int child_card) const {
  PriorSpec p{ProbArray::Constant(num_configs, child_card, alpha),
              ProbVector::Constant(num_configs, beta)};
  p.validate();
  return p;
}

CompletionDistribution phi_mar(const CountTable& t, const PriorSpec& prior) {
  check_shape(t, prior);
  const ProbArray a = prior.child_alpha + t.obs.cast<double>();
  CompletionDistribution out{a.colwise() / a.rowwise().sum(), PhiSource::kMar};
  enforce_simplex_rows(out.phi);
  return out;
}

CompletionDistribution phi_uniform(const ParentContext& ctx) {
  return phi_uniform(ctx.num_configs(), ctx.child_cardinality());
}

CompletionDistribution phi_uniform(std::int64_t num_configs, int child_card) {
  return {ProbArray::Constant(num_configs, child_card, 1.0 / child_card),
          PhiSource::kUniform};
}

CompletionDistribution phi_user(ProbArray phi) {
  if (!(phi >= 0.0).all() || !phi.isFinite().all())
    throw ValidationError("phi entries must be finite and non-negative");
  for (Eigen::Index j = 0; j < phi.rows(); ++j) {
    const double s = phi.row(j).sum();
    if (std::abs(s - 1.0) > 1e-9)
      throw ValidationError("phi row " + std::to_string(j) +
                            " does not sum to 1");
    phi.row(j) /= s;
  }
  return {std::move(phi), PhiSource::kUser};
}

BoundTable bounds(const CountTable& t, const PriorSpec& prior) {
  check_shape(t, prior);
  const Eigen::Index q = t.num_configs();
  const int c = t.child_cardinality();
  const ProbArray a = prior.child_alpha + t.obs.cast<double>();
  const ProbVector base = a.rowwise().sum();
  const ProbArray comp = t.comp.cast<double>();

  BoundTable b;
  b.p_max = (a + comp) / (comp.colwise() + base);
  b.p_lmin.reserve(c);
  for (int l = 0; l < c; ++l)
    b.p_lmin.push_back(a.colwise() / (base + comp.col(l)));
  b.p_min = ProbArray(q, c);
  for (Eigen::Index j = 0; j < q; ++j) {
    // The smallest p_l. comes from the largest n*_l.
    Eigen::Index lmax = 0;
    comp.row(j).maxCoeff(&lmax);
    b.p_min.row(j) = b.p_lmin[lmax].row(j);
  }
  return b;
}

ProbArray collapse(const BoundTable& b, const CompletionDistribution& phi) {
  const Eigen::Index q = b.p_max.rows();
  const Eigen::Index c = b.p_max.cols();
  if (phi.phi.rows() != q || phi.phi.cols() != c)
    throw ValidationError("phi shape does not match the count table");
  // p_hat = p* - sum_{l != k} phi_l (p* - p_l.); the differences vanish
  // exactly when nothing is missing, so complete data reproduces the
  // posterior mean bit for bit.
  ProbArray p_hat = b.p_max;
  for (Eigen::Index l = 0; l < c; ++l) {
    const ProbArray gap = b.p_max - b.p_lmin[l];
    for (Eigen::Index k = 0; k < c; ++k) {
      if (k == l) continue;
      p_hat.col(k) -= phi.phi.col(l) * gap.col(k);
    }
  }
  enforce_simplex_rows(p_hat);
  return p_hat;
}

namespace {

// With equal completion counts m in a row and phi = (alpha_k + n_k) / (alpha +
// n), the collapse (alpha_k + n_k + phi_k m) / (alpha + n + m) is phi itself.
// Using phi directly keeps the identity exact in floating point.
void apply_mar_identity(const CountTable& t, const CompletionDistribution& phi,
                        ProbArray& p_hat) {
  if (phi.source != PhiSource::kMar) return;
  for (Eigen::Index j = 0; j < t.num_configs(); ++j)
    if ((t.comp.row(j) == t.comp(j, 0)).all()) p_hat.row(j) = phi.phi.row(j);
}

}  // namespace

ProbArray collapse(const CountTable& t, const PriorSpec& prior,
                   const CompletionDistribution& phi) {
  ProbArray p_hat = collapse(bounds(t, prior), phi);
  apply_mar_identity(t, phi, p_hat);
  return p_hat;
}

ProbVector parent_phi_mar(const CountTable& t, const PriorSpec& prior) {
  check_shape(t, prior);
  const ProbVector b = prior.parent_beta + t.parent_obs.cast<double>();
  ProbVector phi = b / b.sum();
  return phi;
}

ProbVector parent_probability(const CountTable& t, const PriorSpec& prior,
                              const ProbVector& parent_phi) {
  check_shape(t, prior);
  if (parent_phi.size() != t.num_configs())
    throw ValidationError("parent phi shape does not match the count table");
  const ProbVector b = prior.parent_beta + t.parent_obs.cast<double>();
  const double base = b.sum();
  const ProbVector comp = t.parent_comp.cast<double>();
  const ProbVector denom = base + comp;
  const ProbVector p_max = (b + comp) / denom;
  // sum_{l != j} phi_l p_l.(j) = b_j (S - phi_j / denom_j), S = sum_l phi_l /
  // denom_l, which keeps this O(q).
  const double s = (parent_phi / denom).sum();
  ProbVector p = b * (s - parent_phi / denom) + parent_phi * p_max;
  Eigen::Map<ProbArray> as_row(p.data(), 1, p.size());
  enforce_simplex_rows(as_row);
  return p;
}

ProbVector precision(const CountTable& t, const PriorSpec& prior,
                     const std::optional<ProbVector>& parent_phi) {
  const ProbVector phi = parent_phi ? *parent_phi : parent_phi_mar(t, prior);
  const ProbVector p = parent_probability(t, prior, phi);
  const double spread =
      static_cast<double>(t.n_total - t.parent_obs.sum());
  return prior.child_precision() + t.parent_obs.cast<double>() + p * spread;
}

BcCellEstimate estimate_family(const CountTable& t, const PriorSpec& prior,
                               const CompletionDistribution& phi,
                               const std::optional<ProbVector>& parent_phi) {
  BoundTable b = bounds(t, prior);
  BcCellEstimate e;
  e.p_hat = collapse(b, phi);
  apply_mar_identity(t, phi, e.p_hat);
  e.p_max = std::move(b.p_max);
  e.p_min = std::move(b.p_min);
  e.alpha_hat = precision(t, prior, parent_phi);
  return e;
}

std::int64_t renormalization_count() {
  return g_renormalizations.load(std::memory_order_relaxed);
}

}  // namespace bcnet
