#pragma once

#include "bcnet/data.hpp"

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace bcnet::test {

inline const char* kExampleCsv =
    "X1,X2,X3\n"
    "1,2,2\n"
    "2,?,1\n"
    "?,1,2\n"
    "?,?,1\n"
    "1,?,?\n";

inline Dataset example() {
  std::istringstream in(kExampleCsv);
  return parse_csv(in);
}

inline std::vector<Variable> make_variables(const std::vector<int>& cards) {
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < cards.size(); ++i) {
    Variable v{"X" + std::to_string(i + 1), {}};
    for (int k = 0; k < cards[i]; ++k) v.states.push_back(std::to_string(k + 1));
    vars.push_back(std::move(v));
  }
  return vars;
}

// Cases drawn uniformly; each entry is hidden with probability p_missing.
inline Dataset random_dataset(std::mt19937_64& rng, const std::vector<int>& cards,
                              std::int64_t n, double p_missing = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EntryMatrix e(n, static_cast<Eigen::Index>(cards.size()));
  for (std::int64_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < cards.size(); ++i) {
      std::uniform_int_distribution<int> pick(0, cards[i] - 1);
      e(r, static_cast<Eigen::Index>(i)) = pick(rng);
      if (u(rng) < p_missing) e(r, static_cast<Eigen::Index>(i)) = kMissing;
    }
  return Dataset(make_variables(cards), std::move(e));
}

inline std::vector<int> random_cards(std::mt19937_64& rng, int nvars,
                                     int max_card) {
  std::uniform_int_distribution<int> pick(2, max_card);
  std::vector<int> cards(nvars);
  for (auto& c : cards) c = pick(rng);
  return cards;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace bcnet::test
