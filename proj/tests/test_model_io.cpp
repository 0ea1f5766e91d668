#include "doctest.h"
#include "support.hpp"

#include "bcnet/bench.hpp"
#include "bcnet/io.hpp"
#include "bcnet/search.hpp"

using namespace bcnet;

TEST_CASE("dag validation") {
  const auto vars = test::make_variables({2, 2, 2});
  CHECK_THROWS_AS(Model::from_arcs(vars, {{0, 1}, {1, 2}, {2, 0}}), ValidationError);
  CHECK_THROWS_AS(Model::from_arcs(vars, {{0, 0}}), ValidationError);
  CHECK_THROWS_AS(Model::from_arcs(vars, {{0, 3}}), ValidationError);
  const Model m = Model::from_arcs(vars, {{1, 2}, {0, 2}, {0, 1}});
  CHECK(m.parents[2] == std::vector<int>{0, 1});
  CHECK(m.arcs() == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(topological_order(m) == std::vector<int>{0, 1, 2});
  CHECK(describe_arcs(m) == "X1->X2 X1->X3 X2->X3");
  CHECK(describe_arcs(Model::empty(vars)) == "(empty)");
}

TEST_CASE("arc difference is the symmetric difference") {
  const auto vars = test::make_variables({2, 2, 2});
  const Model chain = Model::from_arcs(vars, {{0, 1}, {1, 2}});
  CHECK(arc_difference(chain, chain) == 0);
  CHECK(arc_difference(chain, Model::from_arcs(vars, {{1, 2}})) == 1);
  CHECK(arc_difference(chain, Model::from_arcs(vars, {{1, 0}, {1, 2}})) == 2);
  CHECK(arc_difference(chain, Model::empty(vars)) == 2);
}

TEST_CASE("model json round trip") {
  const Dataset d = test::example();
  const Model m = k2_bc(d, OrderConstraint::identity(3));
  const Json j = model_to_json(m);
  CHECK(j.contains("cpts"));
  CHECK(j.contains("score"));
  const Model back = model_from_json(j);
  CHECK(back.same_structure(m));
  CHECK(back.variables.size() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(((*back.cpts)[i] - (*m.cpts)[i]).abs().maxCoeff() < 1e-15);
  // Key order is fixed.
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"variables", "arcs", "cpts", "score"});
}

TEST_CASE("malformed model json") {
  const Json no_variables = Json::parse(R"({"arcs": []})");
  const Json unknown_arc = Json::parse(
      R"({"variables": [{"name": "A", "states": ["0", "1"]}], "arcs": [["A", "B"]]})");
  const Json bad_row = Json::parse(
      R"j({"variables": [{"name": "A", "states": ["0", "1"]}], "arcs": [],
          "cpts": {"A": {"()": [0.5, 0.6]}}})j");
  CHECK_THROWS_AS(model_from_json(no_variables), ValidationError);
  CHECK_THROWS_AS(model_from_json(unknown_arc), ValidationError);
  CHECK_THROWS_AS(model_from_json(bad_row), ValidationError);
}

TEST_CASE("score report") {
  const Dataset d = test::example();
  const Model m = Model::from_arcs(d.variables(), {{0, 2}});
  const ModelScore s = log_marginal(m, d, {});
  const Json j = score_report_json(m, s);
  CHECK(j["model"] == Json::parse(R"([["X1", "X3"]])"));
  CHECK(j["families"].size() == 3);
  CHECK(j["families"][2]["parents"] == Json::parse(R"(["X1"])"));
  CHECK(j["total_log_marginal"].get<double>() == s.total_log_marginal);
}

TEST_CASE("phi files") {
  const PhiPolicy nested = phi_policy_from_json(
      Json::parse(R"({"X3": {"X1=1,X2=1": [0.3, 0.7], "*": [0.5, 0.5]}})"));
  CHECK(nested.kind == PhiSource::kUser);
  CHECK(nested.user.at("X3").at("X1=1,X2=1") == std::vector<double>{0.3, 0.7});
  const PhiPolicy flat =
      phi_policy_from_json(Json::parse(R"({"X1=1,X2=1": [0.3, 0.7]})"));
  CHECK(flat.user.at("*").at("X1=1,X2=1") == std::vector<double>{0.3, 0.7});
  CHECK_THROWS_AS(phi_policy_from_json(Json::parse("[1, 2]")), ValidationError);
  CHECK_THROWS_AS(phi_policy_from_json(Json::parse(R"({"X3": {"a": ["x"]}})")),
                  ValidationError);
}

TEST_CASE("dot export") {
  const auto vars = test::make_variables({2, 2});
  const std::string dot = to_dot(Model::from_arcs(vars, {{0, 1}}));
  CHECK(dot == "digraph bbn {\n  \"X1\";\n  \"X2\";\n  \"X1\" -> \"X2\";\n}\n");
}

TEST_CASE("model marginals by enumeration") {
  const auto vars = test::make_variables({2, 2});
  Model m = Model::from_arcs(vars, {{0, 1}});
  ProbArray root(1, 2), child(2, 2);
  root << 0.3, 0.7;
  child << 0.9, 0.1, 0.2, 0.8;
  m.cpts = std::vector<ProbArray>{root, child};
  const auto marg = model_marginals(m);
  CHECK(marg[0](0) == doctest::Approx(0.3));
  CHECK(marg[1](0) == doctest::Approx(0.3 * 0.9 + 0.7 * 0.2));
}
