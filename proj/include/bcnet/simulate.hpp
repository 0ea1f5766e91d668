#pragma once

#include "bcnet/data.hpp"
#include "bcnet/io.hpp"
#include "bcnet/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace bcnet {

// Name recorded in outputs so datasets can be regenerated elsewhere: seeds are
// derived with SplitMix64, draws come from std::mt19937_64, and uniforms take
// the top 53 bits of a draw.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64";

// Derives an independent seed for one purpose ("sample", "delete", ...).
std::uint64_t split_seed(std::uint64_t seed, std::string_view purpose);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform on [0, 1).
  double uniform();
  // Uniform on {0, ..., bound - 1}, without modulo bias.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// A network with complete CPTs plus sampling parameters.
struct GenerativeSpec {
  std::string name;
  Model model;
  std::int64_t n = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

GenerativeSpec spec_from_json(const Json& j);
Json spec_to_json(const GenerativeSpec& g);

// Forward-samples g.n cases in topological order.
Dataset sample(const GenerativeSpec& g);

struct DeletionPlan {
  // Target fraction of all entries that are missing afterwards.
  double fraction = 0.0;
  std::uint64_t seed = 0;
};

// Hides observed entries chosen uniformly without replacement until
// round(fraction * entries) are missing. Entries that are already missing
// count toward the target, so applying increasing fractions in turn yields
// nested datasets.
Dataset delete_entries(const Dataset& d, const DeletionPlan& plan);

// M1..M4 generating structures with the shipped CPTs.
GenerativeSpec builtin_spec(const std::string& name);
std::vector<std::string> builtin_spec_names();

}  // namespace bcnet
