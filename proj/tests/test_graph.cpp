#include <doctest.h>

#include <algorithm>
#include <set>

#include "support.hpp"
#include "tenseq/errors.hpp"
#include "tenseq/graph.hpp"

using namespace tenseq;

TEST_CASE("graph adjacency stays symmetric and simple") {
  Graph g(4);
  CHECK(g.add_edge(0, 1));
  CHECK_FALSE(g.add_edge(1, 0));
  CHECK(g.add_edge(2, 1));
  CHECK_THROWS_AS(g.add_edge(3, 3), ContractViolation);
  CHECK_THROWS(g.add_edge(0, 4));
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(2, 1));
  CHECK(g.degree(1) == 2);
  CHECK(g.edge_count() == 2);
  CHECK(g.neighbors(1) == std::vector<int>{0, 2});
  CHECK_FALSE(g.is_connected());
  CHECK(g.components().size() == 2);
}

TEST_CASE("induced subgraph renumbers vertices") {
  Graph g = testing::cycle_graph(5);
  Graph h = g.induced({0, 1, 2});
  CHECK(h.n() == 3);
  CHECK(h.edges() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("line graph of small networks") {
  SUBCASE("path") {
    TensorNetwork net;
    for (int i = 0; i < 3; ++i) net.add_vertex();
    const int e1 = net.add_wire(0, 1);
    const int e2 = net.add_wire(1, 2);
    auto m = line_graph(net);
    CHECK(m.line_graph.n() == 2);
    CHECK(m.line_graph.edge_count() == 1);
    CHECK(m.wire_of_vertex == std::vector<int>{e1, e2});
    CHECK(m.vertex_of_wire.at(e2) == 1);
  }
  SUBCASE("triangle is self-dual") {
    TensorNetwork net = network_from_graph(testing::cycle_graph(3));
    auto m = line_graph(net);
    CHECK(m.line_graph == testing::complete_graph(3));
  }
  SUBCASE("star becomes a clique") {
    TensorNetwork net;
    for (int i = 0; i < 4; ++i) net.add_vertex();
    for (int leaf = 1; leaf < 4; ++leaf) net.add_wire(0, leaf);
    CHECK(line_graph(net).line_graph == testing::complete_graph(3));
  }
  SUBCASE("parallel wires are adjacent") {
    TensorNetwork net;
    net.add_vertex();
    net.add_vertex();
    net.add_wire(0, 1);
    net.add_wire(0, 1);
    auto m = line_graph(net);
    CHECK(m.line_graph.n() == 2);
    CHECK(m.line_graph.has_edge(0, 1));
  }
  SUBCASE("no wires") {
    TensorNetwork net;
    net.add_vertex();
    net.add_open_leg(0);
    CHECK_THROWS_WITH_AS(line_graph(net), doctest::Contains("no contractible wires"), ContractViolation);
  }
}

TEST_CASE("line graph edges match shared endpoints on random multigraphs") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    TensorNetwork net = testing::random_network(9, rng, t);
    auto m = line_graph(net);
    REQUIRE(m.line_graph.n() == static_cast<int>(net.wire_count()));
    for (int a = 0; a < m.line_graph.n(); ++a)
      for (int b = a + 1; b < m.line_graph.n(); ++b) {
        const Wire& x = net.wire(m.wire_of_vertex[static_cast<std::size_t>(a)]);
        const Wire& y = net.wire(m.wire_of_vertex[static_cast<std::size_t>(b)]);
        const bool share = x.u == y.u || x.u == y.v || x.v == y.u || x.v == y.v;
        CHECK(m.line_graph.has_edge(a, b) == share);
      }
  }
}

TEST_CASE("network invariants") {
  TensorNetwork net;
  TensorSlot slot;
  slot.rank = 2;
  net.add_vertex(slot);
  net.add_vertex();
  const int w = net.add_wire(0, 1);
  CHECK_THROWS_AS(net.add_wire(0, 0), ContractViolation);
  CHECK_THROWS_AS(net.add_wire_with_id(w, 0, 1), ContractViolation);
  CHECK_THROWS_AS(net.validate(), ContractViolation);  // rank 2, one wire end
  net.add_open_leg(0);
  CHECK_NOTHROW(net.validate());
  CHECK(net.arity(0) == 2);

  TensorNetwork loops(true);
  loops.add_vertex();
  loops.add_wire(0, 0);
  CHECK(loops.arity(0) == 2);
}

TEST_CASE("to_simple collapses parallels and drops loops") {
  TensorNetwork net(true);
  for (int i = 0; i < 3; ++i) net.add_vertex();
  net.add_wire(0, 1);
  net.add_wire(1, 0);
  net.add_wire(1, 2);
  net.add_wire(2, 2);
  auto s = to_simple(net);
  CHECK(s.graph.edge_count() == 2);
  CHECK(s.multiplicity.at({0, 1}) == 2);
  CHECK(s.multiplicity.at({1, 2}) == 1);
  CHECK(s.dropped_loops == 1);
}

TEST_CASE("random regular graphs are connected, regular and seeded") {
  for (int r : {3, 4, 5})
    for (int n : {10, 18, 30}) {
      if (r * n % 2) continue;
      Graph g = random_regular(r, n, 7);
      CHECK(g.is_connected());
      for (int v = 0; v < n; ++v) CHECK(g.degree(v) == r);
      CHECK(random_regular(r, n, 7) == g);
    }
  CHECK_FALSE(random_regular(3, 30, 1) == random_regular(3, 30, 2));
  CHECK_THROWS_AS(random_regular(3, 9, 0), ParameterError);
  CHECK_THROWS_AS(random_regular(4, 4, 0), ParameterError);
}

TEST_CASE("gr format round trip and strict parsing") {
  Graph g = testing::grid_graph(2, 3);
  const std::string text = write_gr(g);
  CHECK(text.rfind("p tw 6 7\n", 0) == 0);
  CHECK(read_gr(text) == g);
  CHECK(read_gr("c comment\np tw 3 2\nc inside\n1 2\n2 3\n") == testing::path_graph(3));
  auto line_of = [](const std::string& bad) -> long long {
    try {
      read_gr(bad);
    } catch (const ParseError& e) {
      return static_cast<long long>(e.line());
    }
    return -1;
  };
  CHECK(line_of("p tw 3 2\n1 2\n") >= 0);          // edge count mismatch
  CHECK(line_of("p tw 3 1\n1 4\n") == 2);          // vertex out of range
  CHECK(line_of("p tw 3 1\n2 2\n") == 2);          // loop
  CHECK(line_of("1 2\np tw 3 1\n") == 1);          // edge before header
  CHECK(line_of("p tw 3 2\n1 2\n2 1\n") == 3);     // duplicate edge
  CHECK(line_of("p td 3 1\n1 2\n") == 1);          // wrong descriptor
  CHECK(line_of("p tw 3 1\n1 x\n") == 2);
}

TEST_CASE("network JSON round trip keeps ids, roles and entries") {
  TensorNetwork net;
  TensorSlot a;
  a.role = Role::gate;
  a.label = "H";
  a.qubits = {0};
  a.layer = 1;
  net.add_vertex(a);
  net.add_vertex();
  const int w = net.add_wire(0, 1, 3);
  const int o = net.add_open_leg(0);
  net.vertex(0).legs = {w, o};
  net.vertex(0).entries.assign(6, {0.5, -0.25});
  TensorNetwork back = read_network_json(write_network_json(net));
  CHECK(network_hash(back) == network_hash(net));
  CHECK(back.wire(w).dim == 3);
  CHECK(back.vertex(0).role == Role::gate);
  CHECK(back.vertex(0).label == "H");
  CHECK(back.vertex(0).legs == std::vector<int>{w, o});
  CHECK(back.vertex(0).entries[5] == std::complex<double>(0.5, -0.25));
  CHECK(back.open_legs().size() == 1);
  CHECK(write_network_json(back) == write_network_json(net));
  CHECK_THROWS_AS(read_network_json("{\"vertices\": 3}"), ParseError);
}

TEST_CASE("role names") {
  for (Role r : {Role::generic, Role::unitary, Role::isometry, Role::op, Role::state, Role::gate, Role::projector})
    CHECK(role_from_string(to_string(r)) == r);
  CHECK(to_string(Role::op) == "operator");
  CHECK_THROWS(role_from_string("tensor"));
}
