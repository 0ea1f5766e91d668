// bcnet: learn, score, estimate, simulate and bench from the command line.
//
// Exit codes: 0 success, 1 invalid input or arguments, 2 internal error.

#include "bcnet/bench.hpp"
#include "bcnet/io.hpp"
#include "bcnet/oracle.hpp"
#include "bcnet/score.hpp"
#include "bcnet/search.hpp"
#include "bcnet/simulate.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace bcnet;

namespace {

struct DataArgs {
  std::string data;
  std::string schema;
  std::string missing_token = "?";
};

struct ScoreArgs {
  double alpha = 1.0;
  double beta = 1.0;
  std::string phi = "mar";
};

struct OracleArgs {
  bool enabled = false;
  std::size_t cap = kDefaultOracleCap;
};

void add_data_flags(CLI::App* cmd, DataArgs& a) {
  cmd->add_option("--data", a.data, "CSV file with a header row")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--schema", a.schema,
                  "JSON sidecar {variable: [states...]}")
      ->check(CLI::ExistingFile);
  cmd->add_option("--missing-token", a.missing_token,
                  "cell value that marks a missing entry")
      ->capture_default_str();
}

void add_score_flags(CLI::App* cmd, ScoreArgs& a) {
  cmd->add_option("--alpha", a.alpha, "prior count per child cell")
      ->capture_default_str();
  cmd->add_option("--beta", a.beta, "prior count per parent configuration")
      ->capture_default_str();
  cmd->add_option("--phi", a.phi, "completion policy: mar, uniform or a JSON file")
      ->capture_default_str();
}

void add_oracle_flags(CLI::App* cmd, OracleArgs& a) {
  cmd->add_flag("--oracle", a.enabled,
                "also report the exact score over all completions (tiny data)");
  cmd->add_option("--oracle-cap", a.cap, "maximum number of completions")
      ->capture_default_str();
}

Dataset load_data(const DataArgs& a) {
  std::optional<Schema> schema;
  if (!a.schema.empty()) schema = load_schema(a.schema);
  return load_csv(a.data, a.missing_token, schema);
}

ScoreOptions score_options(const ScoreArgs& a) {
  if (!(a.alpha > 0.0) || !(a.beta > 0.0))
    throw ValidationError("--alpha and --beta must be positive");
  ScoreOptions opts;
  opts.prior = {a.alpha, a.beta};
  if (a.phi == "mar") {
    opts.phi.kind = PhiSource::kMar;
  } else if (a.phi == "uniform") {
    opts.phi.kind = PhiSource::kUniform;
  } else {
    if (!fs::exists(a.phi))
      throw ValidationError("--phi must be mar, uniform or an existing file: " +
                            a.phi);
    opts.phi = phi_policy_from_json(read_json_file(a.phi));
  }
  return opts;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

// JSON to a file, or to stdout when no path is given.
void emit_json(const Json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(j, path);
  }
}

std::vector<std::pair<int, int>> parse_arcs(const Dataset& d,
                                            const std::string& text) {
  std::vector<std::pair<int, int>> arcs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto arrow = item.find("->");
    if (arrow == std::string::npos)
      throw ValidationError("arc '" + item + "' is not of the form A->B");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string from = trim(item.substr(0, arrow));
    const std::string to = trim(item.substr(arrow + 2));
    const int p = d.find_variable(from);
    const int c = d.find_variable(to);
    if (p < 0) throw ValidationError("unknown variable '" + from + "'");
    if (c < 0) throw ValidationError("unknown variable '" + to + "'");
    arcs.emplace_back(p, c);
  }
  return arcs;
}

std::vector<int> parse_names(const Dataset& d, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    const int i = d.find_variable(name);
    if (i < 0) throw ValidationError("unknown variable '" + name + "'");
    out.push_back(i);
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v;
    if (!(is >> v) || !(is >> std::ws).eof())
      throw ValidationError(std::string("bad ") + what + " entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError(std::string("empty ") + what);
  return out;
}

GenerativeSpec load_spec(const std::string& name_or_path) {
  if (fs::exists(name_or_path)) {
    GenerativeSpec g = spec_from_json(read_json_file(name_or_path));
    if (g.name.empty()) g.name = fs::path(name_or_path).stem().string();
    return g;
  }
  return builtin_spec(name_or_path);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// learn ---------------------------------------------------------------------

struct LearnArgs {
  DataArgs data;
  ScoreArgs score;
  OracleArgs oracle;
  std::string order;
  int max_parents = -1;
  std::string out;
  std::string dot;
  std::string report;
};

int run_learn(const LearnArgs& a) {
  const Dataset d = load_data(a.data);
  OrderConstraint order = a.order.empty()
                              ? OrderConstraint::identity(d.num_variables())
                              : OrderConstraint::parse(d, a.order);
  if (a.max_parents >= 0) order.max_parents = a.max_parents;
  SearchOptions opts;
  opts.score = score_options(a.score);

  const auto start = std::chrono::steady_clock::now();
  Model m = k2_bc(d, order, opts);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  Json model_json = model_to_json(m);
  if (a.oracle.enabled)
    model_json["oracle_log_marginal"] =
        exact_log_marginal(d, m, opts.score.prior, WeightPolicy::uniform(),
                           a.oracle.cap);
  if (!a.out.empty()) write_json_file(model_json, a.out);
  if (!a.dot.empty()) write_text(to_dot(m), a.dot);
  if (!a.report.empty()) write_json_file(score_report_json(m, *m.score), a.report);

  std::cout << "log_score=" << format_double(m.score->total_log_marginal)
            << " arcs=" << describe_arcs(m) << " time=" << format_double(seconds)
            << "s\n";
  return 0;
}

// score ---------------------------------------------------------------------

struct ScoreCmdArgs {
  DataArgs data;
  ScoreArgs score;
  OracleArgs oracle;
  std::string model;
  std::string arcs;
  std::string out;
};

int run_score(const ScoreCmdArgs& a) {
  const Dataset d = load_data(a.data);
  Model m;
  if (!a.model.empty()) {
    m = model_from_json(read_json_file(a.model));
    m.cpts.reset();
    m.score.reset();
  } else {
    m = Model::from_arcs(d.variables(), parse_arcs(d, a.arcs));
  }
  const ScoreOptions opts = score_options(a.score);
  const ModelScore s = log_marginal(m, d, opts);
  Json report = score_report_json(m, s);
  if (a.oracle.enabled)
    report["oracle_log_marginal"] = exact_log_marginal(
        d, m, opts.prior, WeightPolicy::uniform(), a.oracle.cap);
  emit_json(report, a.out);
  return 0;
}

// estimate ------------------------------------------------------------------

struct EstimateArgs {
  DataArgs data;
  ScoreArgs score;
  OracleArgs oracle;
  std::string child;
  std::string parents;
  std::string out;
};

int run_estimate(const EstimateArgs& a) {
  const Dataset d = load_data(a.data);
  const int child = d.find_variable(a.child);
  if (child < 0) throw ValidationError("unknown variable '" + a.child + "'");
  const ParentContext ctx(d, child, parse_names(d, a.parents));
  const ScoreOptions opts = score_options(a.score);
  const CountTable t = tally(d, ctx);
  const PriorSpec prior = opts.prior.make(ctx);
  const CompletionDistribution phi = opts.phi.make(d, ctx, t, prior);
  const BcCellEstimate e = estimate_family(t, prior, phi);
  Json report = estimate_report_json(d, ctx, t, prior, phi, e);
  if (a.oracle.enabled) {
    const ProbArray exact =
        exact_expectation(d, ctx, prior, WeightPolicy::uniform(), a.oracle.cap);
    auto& configs = report["configurations"];
    for (Eigen::Index j = 0; j < exact.rows(); ++j) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < exact.cols(); ++k) row.push_back(exact(j, k));
      configs[static_cast<std::size_t>(j)]["oracle_expectation"] = row;
    }
  }
  emit_json(report, a.out);
  return 0;
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
  std::string spec;
  std::int64_t n = -1;
  std::optional<std::uint64_t> seed;
  double missing = 0.0;
  std::string missing_token = "?";
  std::string out;
  std::string schema_out;
  std::string spec_out;
};

int run_simulate(const SimulateArgs& a) {
  GenerativeSpec g = load_spec(a.spec);
  if (a.n >= 0) g.n = a.n;
  if (a.seed) g.seed = *a.seed;
  Dataset d = sample(g);
  if (a.missing > 0.0)
    d = delete_entries(d, {a.missing, split_seed(g.seed, "deletion")});
  if (a.out.empty()) {
    write_csv(d, std::cout, a.missing_token);
  } else {
    write_csv(d, fs::path(a.out), a.missing_token);
  }
  if (!a.schema_out.empty()) write_schema(d, a.schema_out);
  if (!a.spec_out.empty()) write_json_file(spec_to_json(g), a.spec_out);
  return 0;
}

// bench ---------------------------------------------------------------------

struct BenchArgs {
  std::string spec;
  std::string seeds = "1";
  std::string ladder = "100,80,60,40,20,0";
  std::int64_t n = -1;
  ScoreArgs score;
  std::string out;
  std::string csv;
  bool no_timing = false;
};

int run_bench_cmd(const BenchArgs& a) {
  BenchConfig cfg;
  cfg.spec = load_spec(a.spec);
  if (a.n >= 0) cfg.spec.n = a.n;
  cfg.seeds = parse_list<std::uint64_t>(a.seeds, "seed list");
  cfg.ladder = parse_list<int>(a.ladder, "ladder");
  cfg.search.score = score_options(a.score);
  const auto rows = run_bench(cfg);
  const bool timing = !a.no_timing;
  if (!a.csv.empty()) {
    std::ofstream out(a.csv, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + a.csv);
    write_bench_csv(out, cfg, rows, timing);
  }
  if (!a.out.empty()) {
    write_json_file(bench_report_json(cfg, rows, timing), a.out);
  }
  if (a.out.empty() && a.csv.empty()) write_bench_csv(std::cout, cfg, rows, timing);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure learning for Bayesian networks from incomplete data"};
  app.require_subcommand(1);

  LearnArgs learn;
  auto* learn_cmd = app.add_subcommand("learn", "search for a network structure");
  add_data_flags(learn_cmd, learn.data);
  add_score_flags(learn_cmd, learn.score);
  add_oracle_flags(learn_cmd, learn.oracle);
  learn_cmd->add_option("--order", learn.order,
                        "comma separated variable names, parents first "
                        "(default: header order)");
  learn_cmd->add_option("--max-parents", learn.max_parents,
                        "cap on parents per node");
  learn_cmd->add_option("--out", learn.out, "model JSON");
  learn_cmd->add_option("--dot", learn.dot, "Graphviz DOT of the structure");
  learn_cmd->add_option("--report", learn.report, "score report JSON");

  ScoreCmdArgs score;
  auto* score_cmd = app.add_subcommand("score", "score a given structure");
  add_data_flags(score_cmd, score.data);
  add_score_flags(score_cmd, score.score);
  add_oracle_flags(score_cmd, score.oracle);
  auto* model_opt = score_cmd->add_option("--model", score.model, "model JSON")
                        ->check(CLI::ExistingFile);
  auto* arcs_opt =
      score_cmd->add_option("--arcs", score.arcs, "arcs such as X1->X2,X2->X3");
  model_opt->excludes(arcs_opt);
  score_cmd->add_option("--out", score.out, "score report JSON (default stdout)");

  EstimateArgs est;
  auto* est_cmd =
      app.add_subcommand("estimate", "bounds and collapsed estimates for a family");
  add_data_flags(est_cmd, est.data);
  add_score_flags(est_cmd, est.score);
  add_oracle_flags(est_cmd, est.oracle);
  est_cmd->add_option("--child", est.child, "child variable")->required();
  est_cmd->add_option("--parents", est.parents, "comma separated parent names");
  est_cmd->add_option("--out", est.out, "estimate report JSON (default stdout)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "sample a dataset from a network");
  sim_cmd->add_option("--spec", sim.spec, "builtin name (M1..M4) or spec JSON")
      ->required();
  sim_cmd->add_option("--n", sim.n, "number of cases (default: the spec's)");
  sim_cmd->add_option("--seed", sim.seed, "seed (default: the spec's)");
  sim_cmd->add_option("--missing", sim.missing,
                      "fraction of entries to delete at random")
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--missing-token", sim.missing_token)->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "CSV output (default stdout)");
  sim_cmd->add_option("--schema-out", sim.schema_out, "schema sidecar output");
  sim_cmd->add_option("--spec-out", sim.spec_out, "resolved spec JSON output");

  BenchArgs bench;
  auto* bench_cmd =
      app.add_subcommand("bench", "learn from a spec under increasing deletion");
  bench_cmd->add_option("--spec", bench.spec, "builtin name (M1..M4) or spec JSON")
      ->required();
  bench_cmd->add_option("--seeds", bench.seeds, "comma separated seeds")
      ->capture_default_str();
  bench_cmd->add_option("--ladder", bench.ladder,
                        "percentages of available entries, non-increasing")
      ->capture_default_str();
  bench_cmd->add_option("--n", bench.n, "number of cases (default: the spec's)");
  add_score_flags(bench_cmd, bench.score);
  bench_cmd->add_option("--out", bench.out, "JSON report");
  bench_cmd->add_option("--csv", bench.csv, "CSV report");
  bench_cmd->add_flag("--no-timing", bench.no_timing,
                      "omit wall times so reports are byte-identical");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*learn_cmd) return run_learn(learn);
    if (*score_cmd) {
      if (score.model.empty() && score.arcs.empty() && !score_cmd->count("--arcs"))
        throw ValidationError("score needs --model or --arcs");
      return run_score(score);
    }
    if (*est_cmd) return run_estimate(est);
    if (*sim_cmd) return run_simulate(sim);
    if (*bench_cmd) return run_bench_cmd(bench);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
