#include "bcnet/bench.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>

namespace bcnet {

std::vector<ProbVector> model_marginals(const Model& m, std::size_t max_joint) {
  if (!m.cpts) throw ValidationError("marginals need a model with CPTs");
  const int nvars = m.num_variables();
  std::size_t joint = 1;
  std::vector<int> cards;
  for (const auto& v : m.variables) {
    cards.push_back(v.cardinality());
    joint *= static_cast<std::size_t>(v.cardinality());
    if (joint > max_joint) return {};
  }
  std::vector<ParentContext> ctx;
  for (int i = 0; i < nvars; ++i) ctx.emplace_back(cards, i, m.parents[i]);

  std::vector<ProbVector> out;
  for (int c : cards) out.push_back(ProbVector::Zero(c));
  std::vector<StateIndex> x(nvars, 0);
  std::vector<StateIndex> pstates;
  while (true) {
    double p = 1.0;
    for (int i = 0; i < nvars && p > 0.0; ++i) {
      pstates.clear();
      for (int q : m.parents[i]) pstates.push_back(x[q]);
      p *= (*m.cpts)[i](ctx[i].encode(pstates), x[i]);
    }
    for (int i = 0; i < nvars; ++i) out[i](x[i]) += p;
    int i = nvars - 1;
    while (i >= 0 && ++x[i] == cards[i]) x[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

OrderConstraint generating_order(const Model& m) {
  OrderConstraint o = OrderConstraint::identity(m.num_variables());
  for (const auto& [p, c] : m.arcs())
    if (p > c) {
      o.order = topological_order(m);
      break;
    }
  return o;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  cfg.spec.validate();
  for (std::size_t s = 0; s < cfg.ladder.size(); ++s) {
    if (cfg.ladder[s] < 0 || cfg.ladder[s] > 100)
      throw ValidationError("ladder percentages must lie in [0, 100]");
    if (s > 0 && cfg.ladder[s] > cfg.ladder[s - 1])
      throw ValidationError("ladder must be non-increasing");
  }
  OrderConstraint order = generating_order(cfg.spec.model);
  order.max_parents = std::nullopt;
  std::vector<BenchRow> rows;
  for (std::uint64_t seed : cfg.seeds) {
    GenerativeSpec g = cfg.spec;
    g.seed = seed;
    Dataset d = sample(g);
    for (std::size_t step = 0; step < cfg.ladder.size(); ++step) {
      const int pct = cfg.ladder[step];
      d = delete_entries(
          d, {1.0 - pct / 100.0,
              split_seed(seed, "ladder-step-" + std::to_string(step))});
      const auto start = std::chrono::steady_clock::now();
      Model m = k2_bc(d, order, cfg.search);
      const auto stop = std::chrono::steady_clock::now();

      BenchRow row;
      row.seed = seed;
      row.available_percent = pct;
      row.available_fraction = 1.0 - summarize_missingness(d).fraction_missing;
      row.arc_difference = arc_difference(m, g.model);
      row.neg_log_score = -m.score->total_log_marginal;
      row.wall_seconds = std::chrono::duration<double>(stop - start).count();
      row.marginals = model_marginals(m);
      row.model = std::move(m);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

Json bench_report_json(const BenchConfig& cfg, const std::vector<BenchRow>& rows,
                       bool with_timing) {
  Json out;
  out["spec"] = cfg.spec.name;
  out["n"] = cfg.spec.n;
  out["rng"] = kRngAlgorithm;
  out["seeds"] = cfg.seeds;
  out["ladder"] = cfg.ladder;
  Json generating = Json::array();
  for (const auto& [p, c] : cfg.spec.model.arcs())
    generating.push_back({cfg.spec.model.variables[p].name,
                          cfg.spec.model.variables[c].name});
  out["generating_arcs"] = generating;
  Json list = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["seed"] = r.seed;
    j["available_percent"] = r.available_percent;
    j["available_fraction"] = r.available_fraction;
    Json arcs = Json::array();
    for (const auto& [p, c] : r.model.arcs())
      arcs.push_back({r.model.variables[p].name, r.model.variables[c].name});
    j["arcs"] = arcs;
    j["arc_difference"] = r.arc_difference;
    j["neg_log_score"] = r.neg_log_score;
    if (with_timing) j["wall_seconds"] = r.wall_seconds;
    Json marg = Json::object();
    for (std::size_t i = 0; i < r.marginals.size(); ++i) {
      Json v = Json::array();
      for (Eigen::Index k = 0; k < r.marginals[i].size(); ++k)
        v.push_back(r.marginals[i](k));
      marg[r.model.variables[i].name] = v;
    }
    j["marginals"] = marg;
    list.push_back(std::move(j));
  }
  out["rows"] = list;
  return out;
}

void write_bench_csv(std::ostream& out, const BenchConfig& cfg,
                     const std::vector<BenchRow>& rows, bool with_timing) {
  const auto& vars = cfg.spec.model.variables;
  out << "seed,available_percent,available_fraction,model,arc_difference,"
         "neg_log_score";
  if (with_timing) out << ",wall_seconds";
  for (const auto& v : vars) out << ",p(" << v.name << '=' << v.states[0] << ')';
  out << '\n';
  for (const auto& r : rows) {
    out << r.seed << ',' << r.available_percent << ',' << std::setprecision(6)
        << r.available_fraction << ",\"" << describe_arcs(r.model) << "\","
        << r.arc_difference << ',' << std::setprecision(10) << r.neg_log_score;
    if (with_timing) out << ',' << std::setprecision(6) << r.wall_seconds;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      out << ',';
      if (i < r.marginals.size())
        out << std::setprecision(6) << r.marginals[i](0);
    }
    out << '\n';
  }
}

}  // namespace bcnet
