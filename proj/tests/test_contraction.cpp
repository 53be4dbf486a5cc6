#include <doctest.h>

#include <numeric>

#include "support.hpp"
#include "tenseq/contraction.hpp"
#include "tenseq/errors.hpp"

using namespace tenseq;

namespace {

std::vector<int> wire_ids(const TensorNetwork& net) {
  std::vector<int> ids;
  for (const auto& w : net.wires()) ids.push_back(w.id);
  return ids;
}

TensorNetwork star(int leaves) {
  TensorNetwork net;
  for (int i = 0; i <= leaves; ++i) net.add_vertex();
  for (int i = 1; i <= leaves; ++i) net.add_wire(0, i);
  return net;
}

}  // namespace

TEST_CASE("evaluate small sequences") {
  SUBCASE("single wire") {
    TensorNetwork net = network_from_graph(testing::path_graph(2));
    auto ev = evaluate_order(net, wire_ids(net));
    CHECK(ev.complexity == 0);
    CHECK(ev.complete());
  }
  SUBCASE("star with three leaves, every order") {
    TensorNetwork net = star(3);
    auto ids = wire_ids(net);
    std::sort(ids.begin(), ids.end());
    do {
      CHECK(evaluate_order(net, ids).complexity == 2);
    } while (std::next_permutation(ids.begin(), ids.end()));
  }
  SUBCASE("four-cycle around the ring") {
    TensorNetwork net = network_from_graph(testing::cycle_graph(4));
    auto ev = evaluate_order(net, wire_ids(net));
    CHECK(ev.complexity == 2);
    CHECK(ev.steps.size() == 3);
    CHECK(ev.skipped.size() == 1);  // the last wire closes a loop
    CHECK(ev.complete());
  }
  SUBCASE("K4 minimum over all orders") {
    TensorNetwork net = network_from_graph(testing::complete_graph(4));
    CHECK(brute_force_cc(net) == testing::oracle_cc(net));
    CHECK(brute_force_cc(net) == 4);
  }
  SUBCASE("parallel wires are consumed with their trigger") {
    TensorNetwork net;
    for (int i = 0; i < 3; ++i) net.add_vertex();
    const int a = net.add_wire(0, 1);
    const int b = net.add_wire(0, 1);
    const int c = net.add_wire(1, 2);
    auto ev = evaluate_order(net, {a, b, c});
    CHECK(ev.steps == std::vector<int>{a, c});
    CHECK(ev.skipped == std::vector<int>{b});
    CHECK(ev.step_degrees == std::vector<int>{2, 0});
    CHECK(ev.consumed[0] == std::vector<int>{a, b});
  }
  SUBCASE("a prefix reports incompleteness") {
    TensorNetwork net = network_from_graph(testing::path_graph(4));
    auto ev = evaluate_order(net, {wire_ids(net)[0]});
    CHECK_FALSE(ev.complete());
    CHECK(ev.groups_left == 3);
  }
  SUBCASE("errors") {
    TensorNetwork net = network_from_graph(testing::path_graph(3));
    CHECK_THROWS_AS(evaluate_order(net, {99}), ContractViolation);
    CHECK_THROWS_AS(evaluate_order(net, {0, 0}), ContractViolation);
  }
}

TEST_CASE("evaluation matches the direct simulation") {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    TensorNetwork net = testing::random_network(12, rng, t);
    std::vector<int> idx(net.wire_count());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    std::vector<int> ids;
    for (int i : idx) ids.push_back(net.wires()[static_cast<std::size_t>(i)].id);
    CHECK(evaluate_order(net, ids).complexity == testing::oracle_order_complexity(net, idx));
  }
}

TEST_CASE("brute force agrees with exhaustive permutations") {
  Rng rng(22);
  for (int t = 0; t < 120; ++t) {
    TensorNetwork net = testing::random_network(7, rng, t);
    CHECK(brute_force_cc(net) == testing::oracle_cc(net));
  }
  TensorNetwork big = network_from_graph(testing::cycle_graph(10));
  CHECK_THROWS_AS(brute_force_cc(big), RefusalError);
}

TEST_CASE("optimal cc equals line-graph treewidth with a witness") {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    TensorNetwork net = testing::random_network(9, rng, t);
    auto r = optimal_cc(net);
    CHECK(r.optimal);
    CHECK(r.cc == brute_force_cc(net));
    CHECK(evaluate_sequence(net, r.sequence) == r.cc);
    CHECK(evaluate_order(net, r.sequence.steps).complete());
    CHECK(r.sequence.network_hash == network_hash(net));
  }
  TensorNetwork c6 = network_from_graph(testing::cycle_graph(6));
  CHECK(optimal_cc(c6).cc == 2);
}

TEST_CASE("initial self-loops are traced before any step") {
  TensorNetwork net(true);
  net.add_vertex();
  net.add_vertex();
  const int loop = net.add_wire(0, 0);
  const int w = net.add_wire(0, 1);
  auto ev = evaluate_order(net, {w});
  CHECK(ev.complexity == 0);
  CHECK(ev.skipped == std::vector<int>{loop});
  CHECK(optimal_cc(net).cc == 0);
}

TEST_CASE("td to sequence equals width for optimal decompositions") {
  Rng rng(24);
  for (int t = 0; t < 300; ++t) {
    TensorNetwork net = testing::random_network(10, rng, t);
    auto map = line_graph(net, true);
    auto r = treewidth_exact(map.line_graph);
    auto seq = td_to_sequence(net, r.td, map);
    CHECK(seq.complexity == r.width);
    // Any decomposition: the sequence never costs more than the width.
    std::vector<int> order(static_cast<std::size_t>(map.line_graph.n()));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    auto td = eo_to_td(map.line_graph, order);
    CHECK(td_to_sequence(net, td, map).complexity <= td.width());
  }
}

TEST_CASE("sequence to ordering round trip never increases") {
  Rng rng(25);
  for (int t = 0; t < 300; ++t) {
    TensorNetwork net = testing::random_network(10, rng, t);
    auto map = line_graph(net, true);
    std::vector<int> ids;
    for (const auto& w : net.wires()) ids.push_back(w.id);
    rng.shuffle(ids);
    auto seq = make_sequence(net, ids);
    auto eo = sequence_to_eo(net, seq, map);
    CHECK(eo.width <= seq.complexity);
    auto td = eo_to_td(map.line_graph, eo.order);
    CHECK(validate_td(map.line_graph, td).ok);
    auto back = td_to_sequence(net, td, map);
    CHECK(back.complexity <= seq.complexity);
  }
}

TEST_CASE("sequence JSON round trip") {
  TensorNetwork net = network_from_graph(testing::grid_graph(2, 3));
  auto r = optimal_cc(net);
  const std::string text = write_sequence_json(r.sequence);
  auto back = read_sequence_json(text);
  CHECK(back.steps == r.sequence.steps);
  CHECK(back.skipped == r.sequence.skipped);
  CHECK(back.complexity == r.sequence.complexity);
  CHECK(back.optimal);
  CHECK(back.network_hash == network_hash(net));
  CHECK_THROWS_AS(read_sequence_json("{\"steps\": 4}"), ParseError);
}
