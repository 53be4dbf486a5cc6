#include <doctest.h>

#include <thread>

#include "support.hpp"
#include "tenseq/treewidth.hpp"

using namespace tenseq;

namespace {

void check_certificate(const Graph& g, const ExactResult& r) {
  if (g.n() == 0) return;
  auto rep = validate_td(g, r.td);
  CHECK_MESSAGE(rep.ok, rep.message);
  CHECK(r.td.width() == r.width);
  CHECK(testing::oracle_ordering_width(g, r.eo.order) == r.width);
  CHECK(r.lower_bound <= r.width);
}

}  // namespace

TEST_CASE("dynamic programming oracle agrees with permutation enumeration") {
  Rng rng(1);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + static_cast<int>(rng.below(7));
    Graph g = testing::random_connected_graph(n, 0.45, rng);
    CHECK(testing::oracle_treewidth(g) == testing::oracle_treewidth_permutations(g));
  }
}

TEST_CASE("treewidth of named graphs") {
  CHECK(treewidth_exact(testing::complete_graph(1)).width == 0);
  CHECK(treewidth_exact(testing::complete_graph(6)).width == 5);
  CHECK(treewidth_exact(testing::path_graph(9)).width == 1);
  CHECK(treewidth_exact(testing::cycle_graph(9)).width == 2);
  CHECK(treewidth_exact(testing::grid_graph(3, 3)).width == 3);
  CHECK(treewidth_exact(testing::grid_graph(5, 5)).width == 5);
  CHECK(treewidth_exact(testing::grid_graph(4, 7)).width == 4);
  Graph petersen(10);
  for (int i = 0; i < 5; ++i) {
    petersen.add_edge(i, (i + 1) % 5);
    petersen.add_edge(i, i + 5);
    petersen.add_edge(5 + i, 5 + (i + 2) % 5);
  }
  auto r = treewidth_exact(petersen);
  CHECK(r.optimal);
  CHECK(r.width == 4);
  check_certificate(petersen, r);
  Graph empty(3);
  CHECK(treewidth_exact(empty).width == 0);
}

TEST_CASE("exact treewidth matches the exhaustive oracle on random graphs") {
  Rng rng(2);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + static_cast<int>(rng.below(11));
    const double p = 0.15 + 0.6 * rng.unit();
    Graph g = testing::random_connected_graph(n, p, rng);
    auto r = treewidth_exact(g);
    CHECK(r.optimal);
    CHECK(r.width == testing::oracle_treewidth(g));
    check_certificate(g, r);
  }
}

TEST_CASE("exact treewidth handles disconnected graphs") {
  Graph g(9);
  for (auto [u, v] : testing::complete_graph(4).edges()) g.add_edge(u, v);
  for (auto [u, v] : testing::cycle_graph(5).edges()) g.add_edge(u + 4, v + 4);
  auto r = treewidth_exact(g);
  CHECK(r.width == 3);
  check_certificate(g, r);
}

TEST_CASE("exact solver is deterministic per seed and seed independent in width") {
  Graph g = random_regular(3, 40, 4);
  ExactOptions a;
  a.seed = 1;
  ExactOptions b;
  b.seed = 2;
  auto r1 = treewidth_exact(g, a);
  auto r2 = treewidth_exact(g, a);
  auto r3 = treewidth_exact(g, b);
  CHECK(r1.eo.order == r2.eo.order);
  CHECK(r1.width == r3.width);
}

TEST_CASE("timeouts and cancellation return valid upper bounds") {
  Graph g = random_regular(5, 60, 3);
  ExactOptions opt;
  opt.timeout = std::chrono::milliseconds(1);
  const auto t0 = std::chrono::steady_clock::now();
  auto r = treewidth_exact(g, opt);
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  CHECK(r.timed_out);
  CHECK_FALSE(r.optimal);
  CHECK(ms < 101.0);
  check_certificate(g, r);

  ExactOptions c;
  c.cancel.cancel();
  auto rc = treewidth_exact(g, c);
  CHECK(rc.timed_out);
  check_certificate(g, rc);

  ExactOptions late;
  std::thread stopper([tok = late.cancel] {
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    tok.cancel();
  });
  auto rl = treewidth_exact(g, late);
  stopper.join();
  CHECK_FALSE(rl.optimal);
  check_certificate(g, rl);
}

TEST_CASE("a tiny memo cap degrades without losing exactness") {
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    Graph g = testing::random_connected_graph(10, 0.4, rng);
    ExactOptions opt;
    opt.memo_cap = 4;
    auto r = treewidth_exact(g, opt);
    CHECK(r.optimal);
    CHECK(r.width == testing::oracle_treewidth(g));
    check_certificate(g, r);
  }
}

TEST_CASE("best heuristic is an upper bound") {
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    Graph g = testing::random_connected_graph(10, 0.3, rng);
    auto eo = best_heuristic(g, t, 3);
    CHECK(eo.width >= testing::oracle_treewidth(g));
    CHECK(testing::oracle_ordering_width(g, eo.order) == eo.width);
  }
}
