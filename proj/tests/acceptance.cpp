// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion plus a few
// diagnostic lines, and exits non-zero when any criterion fails.

#include "support.hpp"

#include "bcnet/bench.hpp"
#include "bcnet/counts.hpp"
#include "bcnet/estimate.hpp"
#include "bcnet/oracle.hpp"
#include "bcnet/score.hpp"
#include "bcnet/search.hpp"
#include "bcnet/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace bcnet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Model random_dag(std::mt19937_64& rng, const Dataset& d) {
  std::vector<std::pair<int, int>> arcs;
  for (int c = 0; c < d.num_variables(); ++c)
    for (int p = 0; p < c; ++p)
      if (test::uniform_int(rng, 0, 1)) arcs.emplace_back(p, c);
  return Model::from_arcs(d.variables(), arcs);
}

std::vector<int> random_parents(std::mt19937_64& rng, int nvars, int child) {
  std::vector<int> parents;
  for (int i = 0; i < nvars; ++i)
    if (i != child && test::uniform_int(rng, 0, 1)) parents.push_back(i);
  return parents;
}

ProbArray random_phi(std::mt19937_64& rng, std::int64_t q, int c) {
  std::exponential_distribution<double> e(1.0);
  ProbArray phi(q, c);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (int k = 0; k < c; ++k) phi(j, k) = e(rng);
    phi.row(j) /= phi.row(j).sum();
  }
  return phi;
}

// 1. Worked-example completion counts.
Outcome example_counts() {
  const Dataset d = test::example();
  const ParentContext ctx(d, 2, {0, 1});
  tally(d, ctx);  // warm-up
  const auto start = Clock::now();
  const CountTable t = tally(d, ctx);
  const double elapsed = seconds_since(start);
  // n*(x_31 | j) for j = (1,1),(1,2),(2,1),(2,2), then n*(x_32 | j).
  const std::int64_t expected[] = {2, 2, 2, 2, 2, 1, 1, 0};
  bool match = true;
  std::string got;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 4; ++j) {
      match &= t.comp(j, k) == expected[k * 4 + j];
      got += (got.empty() ? "" : ",") + std::to_string(t.comp(j, k));
    }
  return {match && elapsed < 1e-3,
          "n* = " + got + ", " + fmt("%.1f us", elapsed * 1e6)};
}

// 2. Complete data: the estimated score is the exact score.
Outcome complete_exactness() {
  std::mt19937_64 rng(2002);
  const auto start = Clock::now();
  int families = 0;
  int bad_score = 0;
  int bad_collapse = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int nvars = test::uniform_int(rng, 1, 4);
    const Dataset d = test::random_dataset(rng, test::random_cards(rng, nvars, 3),
                                           test::uniform_int(rng, 0, 50));
    const Model m = random_dag(rng, d);
    for (int i = 0; i < nvars; ++i) {
      const ParentContext ctx(d, i, m.parents[i]);
      const CountTable t = tally(d, ctx);
      const PriorSpec prior = PriorPolicy{}.make(ctx);
      const double bc = log_g_bc(t, prior, phi_mar(t, prior)).log_g;
      const double ex = log_g_exact(t, prior).log_g;
      const double rel = std::abs(bc - ex) / std::max(1.0, std::abs(ex));
      worst = std::max(worst, rel);
      bad_score += rel > 1e-9;
      const ProbArray p = collapse(t, prior, phi_mar(t, prior));
      for (Eigen::Index j = 0; j < t.num_configs(); ++j)
        for (int k = 0; k < ctx.child_cardinality(); ++k) {
          const double posterior_mean = (prior.child_alpha(j, k) + static_cast<double>(t.obs(j, k))) /
                             (prior.child_precision()(j) +
                              static_cast<double>(t.obs.row(j).sum()));
          bad_collapse += p(j, k) != posterior_mean;
        }
      ++families;
    }
  }
  const double elapsed = seconds_since(start);
  return {bad_score == 0 && bad_collapse == 0 && elapsed < 5.0,
          std::to_string(families) + " families, max rel diff " + fmt("%.2e", worst) +
              ", collapse mismatches " + std::to_string(bad_collapse) + ", " +
              fmt("%.2f s", elapsed)};
}

// Brute-force product of one-step predictive probabilities.
double sequential_predictive(const Dataset& d, const Model& m) {
  double prob = 1.0;
  std::vector<ParentContext> ctx;
  std::vector<std::vector<std::vector<double>>> counts(d.num_variables());
  for (int i = 0; i < d.num_variables(); ++i) {
    ctx.emplace_back(d, i, m.parents[i]);
    counts[i].assign(ctx[i].num_configs(),
                     std::vector<double>(d.variable(i).cardinality(), 1.0));
  }
  for (std::int64_t r = 0; r < d.num_cases(); ++r) {
    std::vector<std::int64_t> config(d.num_variables());
    for (int i = 0; i < d.num_variables(); ++i) {
      std::vector<StateIndex> ps;
      for (int p : m.parents[i]) ps.push_back(d.at(r, p));
      config[i] = ctx[i].encode(ps);
      const auto& row = counts[i][config[i]];
      double total = 0.0;
      for (double v : row) total += v;
      prob *= row[d.at(r, i)] / total;
    }
    for (int i = 0; i < d.num_variables(); ++i) counts[i][config[i]][d.at(r, i)] += 1.0;
  }
  return prob;
}

// 3. Complete data: score equals the sequential predictive product.
Outcome sequential_oracle() {
  std::mt19937_64 rng(3003);
  double worst = 0.0;
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int nvars = test::uniform_int(rng, 1, 3);
    const Dataset d = test::random_dataset(rng, std::vector<int>(nvars, 2),
                                           test::uniform_int(rng, 0, 5));
    const Model m = random_dag(rng, d);
    const double g = std::exp(log_marginal(m, d, {}).total_log_marginal);
    const double ref = sequential_predictive(d, m);
    const double rel = std::abs(g - ref) / ref;
    worst = std::max(worst, rel);
    bad += rel > 1e-9;
  }
  return {bad == 0, "100 datasets, max rel diff " + fmt("%.2e", worst)};
}

// 4. Containment of the exact expectation and of every collapse in [p., p*].
Outcome containment() {
  std::mt19937_64 rng(4004);
  const auto start = Clock::now();
  int instances = 0;
  int cells = 0;
  int oracle_violations = 0;
  int collapse_violations = 0;
  while (instances < 200) {
    const int nvars = test::uniform_int(rng, 1, 3);
    const auto cards = test::random_cards(rng, nvars, 3);
    const Dataset d = test::random_dataset(rng, cards, test::uniform_int(rng, 1, 6),
                                           std::uniform_real_distribution<>(0.1, 0.5)(rng));
    if (summarize_missingness(d).total_missing == 0) continue;
    if (count_completions(d, kDefaultOracleCap) > kDefaultOracleCap) continue;
    const int child = test::uniform_int(rng, 0, nvars - 1);
    const ParentContext ctx(d, child, random_parents(rng, nvars, child));
    const CountTable t = tally(d, ctx);
    const PriorSpec prior = PriorPolicy{}.make(ctx);
    const BoundTable b = bounds(t, prior);
    const ProbArray e = exact_expectation(d, ctx, prior);
    oracle_violations += ((e < b.p_min - 1e-12) || (e > b.p_max + 1e-12)).count();
    cells += static_cast<int>(e.size());
    for (int draw = 0; draw < 100; ++draw) {
      const ProbArray p = collapse(
          b, phi_user(random_phi(rng, ctx.num_configs(), ctx.child_cardinality())));
      collapse_violations += ((p < b.p_min - 1e-12) || (p > b.p_max + 1e-12)).count();
    }
    ++instances;
  }
  const double elapsed = seconds_since(start);
  return {oracle_violations == 0 && collapse_violations == 0 && elapsed < 60.0,
          std::to_string(instances) + " instances, " + std::to_string(cells) +
              " cells, oracle violations " + std::to_string(oracle_violations) +
              ", collapse violations " + std::to_string(collapse_violations) + ", " +
              fmt("%.2f s", elapsed),
          {"uniform completion weights; at most 3 states per variable"}};
}

// 5. Totally missing data and the empty database.
Outcome limits() {
  int bad = 0;
  double worst_alpha = 0.0;
  for (const auto& cards : std::vector<std::vector<int>>{{2}, {3, 2}, {2, 3, 2}, {4, 3, 3}}) {
    for (const double alpha : {1.0, 0.5, 2.0}) {
      for (const double beta : {1.0, 0.25, 3.0}) {
        const int nvars = static_cast<int>(cards.size());
        const std::int64_t n = 7 + nvars;
        const Dataset d(test::make_variables(cards),
                        EntryMatrix::Constant(n, nvars, kMissing));
        std::vector<int> parents;
        for (int i = 1; i < nvars; ++i) parents.push_back(i);
        const ParentContext ctx(d, 0, parents);
        const CountTable t = tally(d, ctx);
        const PriorSpec prior = PriorPolicy{alpha, beta}.make(ctx);
        const BcCellEstimate e = estimate_family(t, prior, phi_mar(t, prior));
        const double beta_i = prior.parent_beta.sum();
        for (Eigen::Index j = 0; j < t.num_configs(); ++j) {
          for (int k = 0; k < ctx.child_cardinality(); ++k)
            bad += e.p_hat(j, k) != prior.child_alpha(j, k) / prior.child_precision()(j);
          const double target = prior.child_precision()(j) +
                                prior.parent_beta(j) / beta_i * static_cast<double>(n);
          const double diff = std::abs(e.alpha_hat(j) - target);
          worst_alpha = std::max(worst_alpha, diff);
          bad += diff > 1e-9;
        }
      }
    }
  }
  const Dataset empty(test::make_variables({2, 3, 2}), EntryMatrix(0, 3));
  const Model m = k2_bc(empty, OrderConstraint::identity(3));
  const bool empty_ok = m.num_arcs() == 0 && m.score->total_log_marginal == 0.0;
  return {bad == 0 && empty_ok,
          "prior-mean mismatches " + std::to_string(bad) + ", max |alpha_hat - target| " +
              fmt("%.1e", worst_alpha) + ", empty database " +
              (empty_ok ? "-> empty graph, score 0" : "-> WRONG")};
}

// 6. Missingness only on the child: the closed form.
Outcome child_only_reduction() {
  std::mt19937_64 rng(6006);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int nvars = test::uniform_int(rng, 1, 4);
    const auto cards = test::random_cards(rng, nvars, 4);
    Dataset d = test::random_dataset(rng, cards, test::uniform_int(rng, 1, 60));
    EntryMatrix e = d.entries();
    const double p = std::uniform_real_distribution<>(0.05, 0.9)(rng);
    for (Eigen::Index r = 0; r < e.rows(); ++r)
      if (std::uniform_real_distribution<>(0, 1)(rng) < p) e(r, 0) = kMissing;
    d = d.with_entries(e);
    std::vector<int> parents;
    for (int i = 1; i < nvars; ++i) parents.push_back(i);
    const ParentContext ctx(d, 0, parents);
    const CountTable t = tally(d, ctx);
    const PriorSpec prior = PriorPolicy{0.5 + trial % 4, 1.0}.make(ctx);
    const auto phi = trial % 2 ? phi_mar(t, prior)
                               : phi_user(random_phi(rng, ctx.num_configs(),
                                                     ctx.child_cardinality()));
    const ProbArray general = collapse(t, prior, phi);
    for (Eigen::Index j = 0; j < t.num_configs(); ++j) {
      const double nstar = static_cast<double>(t.comp(j, 0));
      const double denom = prior.child_precision()(j) +
                           static_cast<double>(t.obs.row(j).sum()) + nstar;
      for (int k = 0; k < ctx.child_cardinality(); ++k) {
        const double closed = (prior.child_alpha(j, k) + static_cast<double>(t.obs(j, k)) +
                               phi.phi(j, k) * nstar) /
                              denom;
        worst = std::max(worst, std::abs(general(j, k) - closed));
      }
    }
  }
  return {worst <= 1e-12, "100 instances, max diff " + fmt("%.2e", worst)};
}

// 7. Sum of alpha_hat over configurations is alpha_i + n.
Outcome precision_conservation() {
  std::mt19937_64 rng(7007);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const int nvars = test::uniform_int(rng, 1, 4);
    const Dataset d = test::random_dataset(rng, test::random_cards(rng, nvars, 4),
                                           test::uniform_int(rng, 0, 80),
                                           std::uniform_real_distribution<>(0, 1)(rng));
    const int child = test::uniform_int(rng, 0, nvars - 1);
    const ParentContext ctx(d, child, random_parents(rng, nvars, child));
    const CountTable t = tally(d, ctx);
    const PriorSpec prior =
        PriorPolicy{std::uniform_real_distribution<>(0.1, 3)(rng),
                    std::uniform_real_distribution<>(0.1, 3)(rng)}
            .make(ctx);
    const ProbVector a = precision(t, prior);
    worst = std::max(worst, std::abs(a.sum() - prior.child_precision().sum() -
                                     static_cast<double>(d.num_cases())));
  }
  return {worst <= 1e-9, "300 instances, max diff " + fmt("%.2e", worst)};
}

// 8. Protocol on M1 over ten seeds.
Outcome m1_protocol() {
  const auto start = Clock::now();
  BenchConfig cfg;
  cfg.spec = builtin_spec("M1");
  for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
  cfg.ladder = {100, 80, 60, 40, 20};
  const auto rows = run_bench(cfg);
  const double elapsed = seconds_since(start);

  std::map<std::uint64_t, std::vector<ProbVector>> full;
  for (const auto& r : rows)
    if (r.available_percent == 100) full[r.seed] = r.marginals;
  std::map<int, int> structure_ok;
  std::map<int, int> marginal_ok;
  std::map<int, std::vector<double>> mean_marg;
  std::vector<double> full_mean(3, 0.0);
  for (const auto& r : rows) {
    double drift = 0.0;
    for (int i = 0; i < 3; ++i)
      drift = std::max(drift, std::abs(r.marginals[i](0) - full[r.seed][i](0)));
    structure_ok[r.available_percent] += r.arc_difference <= 1;
    marginal_ok[r.available_percent] += drift <= 0.05;
    auto& mm = mean_marg[r.available_percent];
    mm.resize(3, 0.0);
    for (int i = 0; i < 3; ++i) mm[i] += r.marginals[i](0) / 10.0;
  }
  bool pass = elapsed <= 120.0;
  std::string detail;
  std::vector<std::string> notes;
  for (int pct : cfg.ladder) {
    pass &= structure_ok[pct] >= 8 && marginal_ok[pct] >= 8;
    detail += std::to_string(pct) + "%: arcs " + std::to_string(structure_ok[pct]) +
              "/10, marginals " + std::to_string(marginal_ok[pct]) + "/10; ";
    double mean_drift = 0.0;
    for (int i = 0; i < 3; ++i)
      mean_drift = std::max(mean_drift, std::abs(mean_marg[pct][i] - mean_marg[100][i]));
    notes.push_back(std::to_string(pct) + "% seed-mean p(X=1) = (" +
                    fmt("%.3f", mean_marg[pct][0]) + ", " + fmt("%.3f", mean_marg[pct][1]) +
                    ", " + fmt("%.3f", mean_marg[pct][2]) + "), max drift from 100% " +
                    fmt("%.3f", mean_drift));
  }
  detail += fmt("%.2f s", elapsed);
  notes.push_back("per seed: >= 8/10 seeds within 1 arc and within 0.05 on every marginal");
  return {pass, detail, notes};
}

// 9. Learning time barely depends on the amount of missing data.
Outcome m3_runtime() {
  BenchConfig cfg;
  cfg.spec = builtin_spec("M3");
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.ladder = {100, 80, 60, 40, 20};
  const auto rows = run_bench(cfg);
  std::vector<double> full, fifth;
  for (const auto& r : rows) {
    if (r.available_percent == 100) full.push_back(r.wall_seconds);
    if (r.available_percent == 20) fifth.push_back(r.wall_seconds);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double a = median(full);
  const double b = median(fifth);
  return {b <= 2.0 * a, "median " + fmt("%.3f ms", a * 1e3) + " at 100%, " +
                            fmt("%.3f ms", b * 1e3) + " at 20%, ratio " + fmt("%.2f", b / a)};
}

// 10. Enumeration over three variables.
Outcome enumeration() {
  std::mt19937_64 rng(1010);
  int bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d = test::random_dataset(rng, test::random_cards(rng, 3, 3),
                                           test::uniform_int(rng, 0, 60), 0.25 * (trial % 4));
    OrderConstraint order = OrderConstraint::identity(3);
    std::shuffle(order.order.begin(), order.order.end(), rng);
    const auto models = enumerate_models(d, order);
    bad += models.size() != 8;
    double total = 0.0;
    for (const auto& s : models) total += s.posterior;
    worst = std::max(worst, std::abs(total - 1.0));
    const Model m = k2_bc(d, order);
    const auto it = std::find_if(models.begin(), models.end(), [&](const ScoredModel& s) {
      return s.model.same_structure(m);
    });
    bad += it == models.end() || it->log_marginal != m.score->total_log_marginal;
  }
  return {bad == 0 && worst <= 1e-9,
          "50 datasets, failures " + std::to_string(bad) + ", max |sum posterior - 1| " +
              fmt("%.1e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"worked-example completion counts", example_counts},
      {"complete-data exactness", complete_exactness},
      {"sequential predictive oracle", sequential_oracle},
      {"bound containment", containment},
      {"limit behaviours", limits},
      {"child-only missingness closed form", child_only_reduction},
      {"precision conservation", precision_conservation},
      {"M1 protocol reproduction", m1_protocol},
      {"M3 runtime flatness", m3_runtime},
      {"enumeration consistency", enumeration},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), {}};
    }
    failures += !o.pass;
    std::printf("%s %2zu %-36s %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    for (const auto& n : o.notes) std::printf("          %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
