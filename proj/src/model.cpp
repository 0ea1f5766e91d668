#include "bcnet/model.hpp"

#include <algorithm>
#include <set>

namespace bcnet {

Model Model::empty(const std::vector<Variable>& variables) {
  Model m;
  m.variables = variables;
  m.parents.assign(variables.size(), {});
  return m;
}

Model Model::from_arcs(const std::vector<Variable>& variables,
                       const std::vector<std::pair<int, int>>& arcs) {
  Model m = empty(variables);
  for (const auto& [p, c] : arcs) {
    if (p < 0 || c < 0 || p >= m.num_variables() || c >= m.num_variables())
      throw ValidationError("arc references an unknown variable");
    m.parents[c].push_back(p);
  }
  for (auto& ps : m.parents) std::sort(ps.begin(), ps.end());
  validate_dag(m);
  return m;
}

std::vector<std::pair<int, int>> Model::arcs() const {
  std::vector<std::pair<int, int>> out;
  for (int c = 0; c < num_variables(); ++c)
    for (int p : parents[c]) out.emplace_back(p, c);
  return out;
}

std::size_t Model::num_arcs() const {
  std::size_t n = 0;
  for (const auto& ps : parents) n += ps.size();
  return n;
}

std::vector<int> topological_order(const Model& m) {
  const int n = m.num_variables();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (int c = 0; c < n; ++c) {
    indegree[c] = static_cast<int>(m.parents[c].size());
    for (int p : m.parents[c]) children[p].push_back(c);
  }
  std::vector<int> order;
  std::vector<int> ready;
  for (int i = n; i-- > 0;)
    if (indegree[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    const int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int c : children[v])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  return order;
}

bool is_acyclic(const Model& m) {
  return topological_order(m).size() == m.variables.size();
}

void validate_dag(const Model& m) {
  if (m.parents.size() != m.variables.size())
    throw ValidationError("model needs one parent set per variable");
  for (int c = 0; c < m.num_variables(); ++c) {
    std::set<int> seen;
    for (int p : m.parents[c]) {
      if (p < 0 || p >= m.num_variables())
        throw ValidationError("parent index out of range");
      if (p == c) throw ValidationError("self loop on " + m.variables[c].name);
      if (!seen.insert(p).second)
        throw ValidationError("repeated parent of " + m.variables[c].name);
    }
  }
  if (!is_acyclic(m)) throw ValidationError("model is not a DAG");
}

std::size_t arc_difference(const Model& a, const Model& b) {
  const auto aa = a.arcs();
  const auto bb = b.arcs();
  std::set<std::pair<int, int>> sa(aa.begin(), aa.end());
  std::set<std::pair<int, int>> sb(bb.begin(), bb.end());
  std::size_t diff = 0;
  for (const auto& e : sa) diff += sb.count(e) == 0;
  for (const auto& e : sb) diff += sa.count(e) == 0;
  return diff;
}

std::string describe_arcs(const Model& m) {
  std::string out;
  for (const auto& [p, c] : m.arcs()) {
    if (!out.empty()) out += ' ';
    out += m.variables[p].name + "->" + m.variables[c].name;
  }
  return out.empty() ? "(empty)" : out;
}

}  // namespace bcnet
