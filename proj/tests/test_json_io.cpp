#include "sc/json_io.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace sc;

TEST_CASE("stressed chain round trip is exact") {
  Rng rng(1);
  const StressedChain P = testing::random_structural_chain(3, 2, 3, rng);
  const std::string text = dump_json(make_document("stressed_chain", chain_to_json(P)));
  const StressedChain Q = chain_from_json(document_payload(parse_json(text), "stressed_chain"));
  REQUIRE(Q.terms.size() == P.terms.size());
  for (size_t i = 0; i < P.terms.size(); ++i) {
    CHECK(Q.terms[i].first == P.terms[i].first);
    for (size_t j = 0; j < P.terms[i].second.v.size(); ++j) CHECK(Q.terms[i].second.v[j] == P.terms[i].second.v[j]);
  }
  CHECK(dump_json(make_document("stressed_chain", chain_to_json(Q))) == text);
}

TEST_CASE("force system and truss round trips") {
  Rng rng(2);
  const ForceSystem F = testing::random_projected_forces(3, 2, 3, rng);
  const ForceSystem G = force_system_from_json(parse_json(dump_json(force_system_to_json(F))));
  REQUIRE(G.entries.size() == F.entries.size());
  for (size_t i = 0; i < F.entries.size(); ++i) CHECK(G.entries[i].density == F.entries[i].density);

  GroundStructure gs;
  gs.nodes = {random_vec(2, rng), random_vec(2, rng), random_vec(2, rng)};
  gs.edges = {{0, 1}, {1, 2}};
  gs.loads = {{1, random_vec(2, rng)}};
  gs.support = {true, false, true};
  const GroundStructure hs = ground_structure_from_json(parse_json(dump_json(ground_structure_to_json(gs))));
  CHECK(hs.edges == gs.edges);
  CHECK(hs.support == gs.support);
  CHECK(hs.loads[0].second == gs.loads[0].second);

  TrussSolution t;
  t.lambda = {0.1, -1.0 / 3.0};
  t.mass = 2.0 / 7.0;
  t.residuals = {{1, random_vec(2, rng)}};
  const TrussSolution u = truss_solution_from_json(parse_json(dump_json(truss_solution_to_json(t))));
  CHECK(u.lambda == t.lambda);
  CHECK(u.mass == t.mass);
  CHECK(u.residuals[0].second == t.residuals[0].second);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(parse_json("{not json"), SchemaError);
  CHECK_THROWS_AS(document_payload(parse_json(R"({"version":"2","kind":"report","payload":{}})"), "report"),
                  SchemaError);
  CHECK_THROWS_AS(document_payload(parse_json(R"({"version":"1","kind":"report","payload":{}})"), "stressed_chain"),
                  SchemaError);
  CHECK_THROWS_AS(make_document("picture", Json::object()), SchemaError);
  CHECK_THROWS_AS(chain_from_json(parse_json(R"({"dim":2,"grade":1})")), SchemaError);
  CHECK_THROWS_AS(chain_from_json(parse_json(
                      R"({"dim":2,"grade":1,"terms":[{"coefficient":[[1,0],[0,1]],"simplex":[[0,0]]}]})")),
                  SchemaError);
  CHECK_THROWS_AS(mat_from_json(parse_json("[[1,2],[3]]")), SchemaError);
  CHECK_THROWS_AS(vec_from_json(parse_json(R"([1,"a"])")), SchemaError);
  CHECK_THROWS_AS(ground_structure_from_json(parse_json(R"({"nodes":[[0,0],[1,0]],"edges":[[0,5]]})")),
                  SchemaError);
}

TEST_CASE("numbers keep full precision") {
  const double x = 0.1 + 0.2;
  const Json j = parse_json(dump_json(Json{{"x", x}}));
  CHECK(j.at("x").get<double>() == x);
}
