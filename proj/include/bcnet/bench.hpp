#pragma once

#include "bcnet/search.hpp"
#include "bcnet/simulate.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bcnet {

// Marginal distribution of every variable under the model's CPTs, by summing
// the joint. Empty when the joint has more than max_joint states.
std::vector<ProbVector> model_marginals(const Model& m,
                                        std::size_t max_joint = 1u << 20);

struct BenchConfig {
  GenerativeSpec spec;
  std::vector<std::uint64_t> seeds;
  // Percentages of available entries, non-increasing. Each step deletes
  // further entries from the previous step's dataset.
  std::vector<int> ladder{100, 80, 60, 40, 20, 0};
  SearchOptions search;
};

struct BenchRow {
  std::uint64_t seed = 0;
  int available_percent = 100;
  double available_fraction = 1.0;
  Model model;
  std::size_t arc_difference = 0;
  double neg_log_score = 0.0;
  double wall_seconds = 0.0;
  std::vector<ProbVector> marginals;
};

// Search order used for a spec: its variable order when that respects every
// arc, otherwise a topological order of the generating structure.
OrderConstraint generating_order(const Model& m);

std::vector<BenchRow> run_bench(const BenchConfig& cfg);

Json bench_report_json(const BenchConfig& cfg, const std::vector<BenchRow>& rows,
                       bool with_timing = true);
void write_bench_csv(std::ostream& out, const BenchConfig& cfg,
                     const std::vector<BenchRow>& rows, bool with_timing = true);

}  // namespace bcnet
