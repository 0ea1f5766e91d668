#include "bcnet/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bcnet {

namespace {

const char* phi_source_name(PhiSource s) {
  switch (s) {
    case PhiSource::kMar:
      return "mar";
    case PhiSource::kUniform:
      return "uniform";
    case PhiSource::kUser:
      return "user";
  }
  return "unknown";
}

template <typename Row>
Json row_to_json(const Row& row) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < row.size(); ++k) out.push_back(row(k));
  return out;
}

int index_of(const std::vector<Variable>& vars, const std::string& name) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<int>(i);
  throw ValidationError("unknown variable '" + name + "'");
}

std::string dot_id(const std::string& s) {
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') q += '\\';
    q += ch;
  }
  return q + '"';
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed JSON in " + path.string() + ": " +
                          e.what());
  }
}

void write_json_file(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json variables_to_json(const std::vector<Variable>& vars) {
  Json out = Json::array();
  for (const auto& v : vars)
    out.push_back(Json{{"name", v.name}, {"states", v.states}});
  return out;
}

std::vector<Variable> variables_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("'variables' must be a list");
  std::vector<Variable> vars;
  try {
    for (const auto& v : j)
      vars.push_back({v.at("name").get<std::string>(),
                      v.at("states").get<std::vector<std::string>>()});
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad variable entry: ") + e.what());
  }
  // Reuse the dataset checks for names and state lists.
  Dataset check(vars, EntryMatrix(0, static_cast<Eigen::Index>(vars.size())));
  return vars;
}

Json model_to_json(const Model& m) {
  Json out;
  out["variables"] = variables_to_json(m.variables);
  Json arcs = Json::array();
  for (const auto& [p, c] : m.arcs())
    arcs.push_back({m.variables[p].name, m.variables[c].name});
  out["arcs"] = arcs;
  if (m.cpts) {
    Json cpts = Json::object();
    const auto cards = [&] {
      std::vector<int> cs;
      for (const auto& v : m.variables) cs.push_back(v.cardinality());
      return cs;
    }();
    for (int i = 0; i < m.num_variables(); ++i) {
      const ParentContext ctx(cards, i, m.parents[i]);
      Json rows = Json::object();
      const ProbArray& cpt = (*m.cpts)[i];
      for (std::int64_t j = 0; j < ctx.num_configs(); ++j)
        rows[ctx.config_label(m.variables, j)] = row_to_json(cpt.row(j));
      cpts[m.variables[i].name] = rows;
    }
    out["cpts"] = cpts;
  }
  if (m.score) out["score"] = score_report_json(m, *m.score);
  return out;
}

Model model_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("variables"))
    throw ValidationError("model JSON needs a 'variables' list");
  const auto vars = variables_from_json(j.at("variables"));
  std::vector<std::pair<int, int>> arcs;
  if (j.contains("arcs")) {
    for (const auto& a : j.at("arcs")) {
      if (!a.is_array() || a.size() != 2)
        throw ValidationError("each arc must be [parent, child]");
      arcs.emplace_back(index_of(vars, a[0].get<std::string>()),
                        index_of(vars, a[1].get<std::string>()));
    }
  }
  Model m = Model::from_arcs(vars, arcs);
  if (j.contains("cpts")) {
    std::vector<int> cards;
    for (const auto& v : vars) cards.push_back(v.cardinality());
    const Json& cj = j.at("cpts");
    std::vector<ProbArray> cpts;
    for (int i = 0; i < m.num_variables(); ++i) {
      const ParentContext ctx(cards, i, m.parents[i]);
      const std::string& name = vars[i].name;
      if (!cj.contains(name))
        throw ValidationError("missing CPT for '" + name + "'");
      ProbArray cpt(ctx.num_configs(), ctx.child_cardinality());
      for (std::int64_t r = 0; r < ctx.num_configs(); ++r) {
        const std::string label = ctx.config_label(vars, r);
        if (!cj.at(name).contains(label))
          throw ValidationError("CPT of '" + name + "' lacks row '" + label +
                                "'");
        const auto row = cj.at(name).at(label).get<std::vector<double>>();
        if (static_cast<int>(row.size()) != ctx.child_cardinality())
          throw ValidationError("CPT row '" + label + "' of '" + name +
                                "' has the wrong length");
        double sum = 0.0;
        for (int k = 0; k < ctx.child_cardinality(); ++k) {
          if (!(row[k] >= 0.0))
            throw ValidationError("negative probability in CPT of '" + name +
                                  "'");
          cpt(r, k) = row[k];
          sum += row[k];
        }
        if (std::abs(sum - 1.0) > 1e-9)
          throw ValidationError("CPT row '" + label + "' of '" + name +
                                "' does not sum to 1");
      }
      cpts.push_back(std::move(cpt));
    }
    m.cpts = std::move(cpts);
  }
  return m;
}

Json score_report_json(const Model& m, const ModelScore& s) {
  Json out;
  Json arcs = Json::array();
  for (const auto& [p, c] : m.arcs())
    arcs.push_back({m.variables[p].name, m.variables[c].name});
  out["model"] = arcs;
  out["total_log_marginal"] = s.total_log_marginal;
  Json fams = Json::array();
  for (const auto& f : s.families) {
    Json parents = Json::array();
    for (int p : f.parents) parents.push_back(m.variables[p].name);
    fams.push_back(Json{{"child", m.variables[f.child].name},
                        {"parents", parents},
                        {"log_g", f.log_g},
                        {"exact", f.exact}});
  }
  out["families"] = fams;
  return out;
}

Json estimate_report_json(const Dataset& d, const ParentContext& ctx,
                          const CountTable& t, const PriorSpec& prior,
                          const CompletionDistribution& phi,
                          const BcCellEstimate& e) {
  Json out;
  out["child"] = d.variable(ctx.child()).name;
  Json parents = Json::array();
  for (int p : ctx.parents()) parents.push_back(d.variable(p).name);
  out["parents"] = parents;
  out["states"] = d.variable(ctx.child()).states;
  out["phi_source"] = phi_source_name(phi.source);
  out["n"] = t.n_total;
  out["incomplete_cases"] = t.incomplete_cases;
  Json configs = Json::array();
  for (std::int64_t j = 0; j < ctx.num_configs(); ++j) {
    Json c;
    c["label"] = ctx.config_label(d, j);
    c["obs"] = row_to_json(t.obs.row(j));
    c["comp"] = row_to_json(t.comp.row(j));
    c["parent_obs"] = t.parent_obs(j);
    c["parent_comp"] = t.parent_comp(j);
    c["alpha"] = row_to_json(prior.child_alpha.row(j));
    c["phi"] = row_to_json(phi.phi.row(j));
    c["p_min"] = row_to_json(e.p_min.row(j));
    c["p_hat"] = row_to_json(e.p_hat.row(j));
    c["p_max"] = row_to_json(e.p_max.row(j));
    c["alpha_hat"] = e.alpha_hat(j);
    configs.push_back(std::move(c));
  }
  out["configurations"] = configs;
  return out;
}

PhiPolicy phi_policy_from_json(const Json& j) {
  if (!j.is_object())
    throw ValidationError("phi file must be a JSON object");
  PhiPolicy policy;
  policy.kind = PhiSource::kUser;
  try {
    // Flat form {label: [p...]} applies to every child.
    const bool flat = !j.empty() && std::all_of(j.begin(), j.end(), [](const Json& v) {
      return v.is_array();
    });
    if (flat) {
      for (const auto& [label, row] : j.items())
        policy.user["*"][label] = row.get<std::vector<double>>();
      return policy;
    }
    for (const auto& [child, table] : j.items()) {
      if (!table.is_object())
        throw ValidationError("phi entry for '" + child + "' must be an object");
      for (const auto& [label, row] : table.items())
        policy.user[child][label] = row.get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad phi file: ") + e.what());
  }
  return policy;
}

std::string to_dot(const Model& m) {
  std::ostringstream out;
  out << "digraph bbn {\n";
  for (const auto& v : m.variables) out << "  " << dot_id(v.name) << ";\n";
  for (const auto& [p, c] : m.arcs())
    out << "  " << dot_id(m.variables[p].name) << " -> "
        << dot_id(m.variables[c].name) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace bcnet
