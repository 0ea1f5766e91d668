#include "bcnet/simulate.hpp"

#include "builtin_specs.hpp"

#include <cmath>
#include <numeric>

namespace bcnet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::string_view purpose) {
  // FNV-1a of the purpose string, mixed with the seed.
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : purpose) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  return splitmix64(splitmix64(seed) ^ h);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

void GenerativeSpec::validate() const {
  validate_dag(model);
  if (n < 0) throw ValidationError("sample size must be non-negative");
  if (!model.cpts) throw ValidationError("generative spec needs CPTs");
  for (int i = 0; i < model.num_variables(); ++i) {
    const ProbArray& cpt = (*model.cpts)[i];
    std::int64_t q = 1;
    for (int p : model.parents[i]) q *= model.variables[p].cardinality();
    if (cpt.rows() != q || cpt.cols() != model.variables[i].cardinality())
      throw ValidationError("CPT of '" + model.variables[i].name +
                            "' has the wrong shape");
    for (Eigen::Index j = 0; j < cpt.rows(); ++j) {
      if (!(cpt.row(j) >= 0.0).all() ||
          std::abs(cpt.row(j).sum() - 1.0) > 1e-9)
        throw ValidationError("invalid CPT row in '" + model.variables[i].name +
                              "'");
    }
  }
}

GenerativeSpec spec_from_json(const Json& j) {
  GenerativeSpec g;
  g.model = model_from_json(j);
  g.name = j.value("name", std::string{});
  g.n = j.value("n", std::int64_t{0});
  g.seed = j.value("seed", std::uint64_t{0});
  g.validate();
  return g;
}

Json spec_to_json(const GenerativeSpec& g) {
  Model m = g.model;
  m.score.reset();
  Json out;
  if (!g.name.empty()) out["name"] = g.name;
  const Json model = model_to_json(m);
  for (const auto& [k, v] : model.items()) out[k] = v;
  out["n"] = g.n;
  out["seed"] = g.seed;
  out["rng"] = kRngAlgorithm;
  return out;
}

Dataset sample(const GenerativeSpec& g) {
  g.validate();
  const Model& m = g.model;
  const int nvars = m.num_variables();
  std::vector<int> cards;
  for (const auto& v : m.variables) cards.push_back(v.cardinality());
  std::vector<ParentContext> ctx;
  for (int i = 0; i < nvars; ++i) ctx.emplace_back(cards, i, m.parents[i]);
  const std::vector<int> order = topological_order(m);

  Rng rng(split_seed(g.seed, "sample"));
  EntryMatrix entries(g.n, nvars);
  std::vector<StateIndex> pstates;
  for (std::int64_t r = 0; r < g.n; ++r) {
    for (int i : order) {
      pstates.clear();
      for (int p : m.parents[i]) pstates.push_back(entries(r, p));
      const auto row = (*m.cpts)[i].row(ctx[i].encode(pstates));
      const double u = rng.uniform();
      double cum = 0.0;
      StateIndex pick = -1;
      for (int k = 0; k < cards[i]; ++k) {
        if (row(k) <= 0.0) continue;
        pick = k;
        cum += row(k);
        if (u < cum) break;
      }
      entries(r, i) = pick;
    }
  }
  return Dataset(m.variables, std::move(entries));
}

Dataset delete_entries(const Dataset& d, const DeletionPlan& plan) {
  if (!(plan.fraction >= 0.0 && plan.fraction <= 1.0))
    throw ValidationError("deletion fraction must lie in [0, 1]");
  EntryMatrix entries = d.entries();
  const std::int64_t total = entries.size();
  const auto target =
      static_cast<std::int64_t>(std::llround(plan.fraction * total));

  std::vector<std::int64_t> observed;
  observed.reserve(total);
  for (std::int64_t e = 0; e < total; ++e)
    if (!is_missing(entries.data()[e])) observed.push_back(e);
  const std::int64_t need = target - (total - static_cast<std::int64_t>(observed.size()));
  if (need <= 0) return d;

  // Partial Fisher-Yates over the observed positions.
  Rng rng(split_seed(plan.seed, "delete"));
  const auto m = static_cast<std::int64_t>(observed.size());
  for (std::int64_t i = 0; i < need; ++i) {
    const auto pick = i + static_cast<std::int64_t>(rng.below(m - i));
    std::swap(observed[i], observed[pick]);
    entries.data()[observed[i]] = kMissing;
  }
  return d.with_entries(std::move(entries));
}

GenerativeSpec builtin_spec(const std::string& name) {
  for (const auto& [key, text] : detail::kBuiltinSpecs) {
    if (name == key) return spec_from_json(Json::parse(text));
  }
  throw ValidationError("unknown builtin spec '" + name + "'");
}

std::vector<std::string> builtin_spec_names() {
  std::vector<std::string> names;
  for (const auto& [key, text] : detail::kBuiltinSpecs) names.emplace_back(key);
  return names;
}

}  // namespace bcnet
