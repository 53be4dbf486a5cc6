#include <doctest.h>

#include <set>

#include "support.hpp"
#include "tenseq/canonical.hpp"
#include "tenseq/circuit.hpp"
#include "tenseq/contraction.hpp"
#include "tenseq/errors.hpp"
#include "tenseq/executor.hpp"
#include "tenseq/mera.hpp"

using namespace tenseq;

namespace {

std::pair<int, int> vertex_range(const MeraCorpus& c) {
  int lo = 1 << 30, hi = 0;
  for (const auto& net : c.networks) {
    lo = std::min(lo, net.vertex_count());
    hi = std::max(hi, net.vertex_count());
  }
  return {lo, hi};
}

TensorNetwork cone_at(int levels, int site) {
  MeraSpec spec;
  spec.levels = levels;
  spec.operator_sites = {{site}};
  return causal_cone_reduce(build_mera(spec));
}

}  // namespace

TEST_CASE("full MERA has the lattice and level structure") {
  MeraSpec spec;
  spec.levels = 3;
  spec.operator_sites = {{0}};
  auto m = build_mera(spec);
  CHECK(mera_side(3) == 16);
  int unitaries = 0, isometries = 0, tops = 0;
  for (int v = 0; v < m.net.vertex_count(); ++v) {
    const auto role = m.net.vertex(v).role;
    if (role == Role::unitary) ++unitaries;
    if (role == Role::isometry) ++isometries;
    if (std::abs(m.level[static_cast<std::size_t>(v)]) == 7) ++tops;
    CHECK(m.mirror[static_cast<std::size_t>(m.mirror[static_cast<std::size_t>(v)])] == v);
  }
  // 16 + 8 + 4 sites per half: 8 + 4 + 2 unitaries and as many isometries,
  // plus the interface tensor, tagged as an isometry.
  CHECK(unitaries == 2 * 14);
  CHECK(isometries == 2 * 15);
  CHECK(tops == 2);
  CHECK_NOTHROW(m.net.validate());
}

TEST_CASE("reduced MERA tensors keep their requisite wire count") {
  for (int d : {1, 2})
    for (int ops : {1, 2}) {
      const int levels = d == 1 ? 4 : 2;
      auto corpus = mera_corpus(d, ops, levels);
      for (const auto& net : corpus.networks) {
        CHECK(net.open_legs().empty());
        for (int v = 0; v < net.vertex_count(); ++v) {
          const auto role = net.vertex(v).role;
          if (role == Role::unitary || role == Role::isometry || role == Role::op)
            CHECK(net.arity(v) == mera_arity(role, d));
        }
        for (const auto& w : net.wires()) CHECK(w.u != w.v);
        CHECK(network_from_graph(to_simple(net).graph).vertex_count() == net.vertex_count());
        CHECK(to_simple(net).graph.is_connected());
      }
    }
}

TEST_CASE("1D corpus counts and vertex ranges") {
  struct Row {
    int ops, levels, total, tabulated, vmin, vmax;
  };
  for (const Row& r : {Row{1, 2, 4, 2, 15, 17}, Row{1, 3, 8, 3, 21, 27}, Row{1, 4, 16, 8, 27, 37},
                       Row{2, 2, 3, 2, 16, 22}, Row{2, 3, 7, 4, 22, 38}, Row{2, 4, 15, 9, 28, 54}}) {
    auto c = mera_corpus(1, r.ops, r.levels);
    CAPTURE(r.ops);
    CAPTURE(r.levels);
    CHECK(c.summary.total == r.total);
    CHECK(c.summary.unique_tabulated == r.tabulated);
    CHECK(c.summary.unique <= c.summary.unique_tabulated);
    CHECK(vertex_range(c) == std::make_pair(r.vmin, r.vmax));
    int cell_total = 0, cell_unique = 0;
    for (const auto& cell : c.summary.cells) {
      cell_total += cell.total;
      cell_unique += cell.unique;
    }
    CHECK(cell_total == c.summary.total);
    CHECK(cell_unique == c.summary.unique);
  }
}

TEST_CASE("corpus classes are consistent with canonical labels") {
  auto c = mera_corpus(1, 1, 4);
  std::set<std::string> labels(c.canonical.begin(), c.canonical.end());
  CHECK(static_cast<int>(labels.size()) == c.summary.unique);
  for (std::size_t i = 0; i < c.networks.size(); ++i) {
    CHECK(c.canonical[i] == canonical_form(c.networks[i]));
    CHECK(c.canonical[static_cast<std::size_t>(c.class_id[i])] == c.canonical[i]);
  }
}

TEST_CASE("16-site three-level MERA: mirrored placements agree, the middle differs") {
  const auto left = canonical_form(cone_at(3, 2));
  const auto middle = canonical_form(cone_at(3, 5));
  const auto right = canonical_form(cone_at(3, 14));
  CHECK(left == right);
  CHECK(left != middle);
  // Translation by the top-level period leaves the network unchanged.
  CHECK(canonical_form(cone_at(3, 0)) == canonical_form(cone_at(3, 8)));
}

TEST_CASE("2D corpus follows the full-window placement rule") {
  auto c = mera_corpus(2, 1, 2);
  CHECK(c.summary.total == 16);
  CHECK(c.summary.unique >= 2);
  CHECK_THROWS_AS(mera_corpus(3, 1, 2), ParameterError);
  CHECK_THROWS_AS(mera_corpus(1, 3, 2), ParameterError);
  CHECK_THROWS_AS(mera_corpus(1, 1, 0), ParameterError);
}

TEST_CASE("QAOA network structure") {
  Graph g = random_regular(3, 8, 2);
  auto net = qaoa_maxcut_network(g);
  const int n = g.n();
  const int m = static_cast<int>(g.edge_count());
  CHECK(net.vertex_count() == 3 * n + m);
  CHECK(static_cast<int>(net.wire_count()) == 2 * m + 2 * n);
  CHECK(net.open_legs().empty());
  CHECK_NOTHROW(net.validate());
  int gates = 0;
  for (int v = 0; v < net.vertex_count(); ++v) {
    const auto& s = net.vertex(v);
    std::size_t expected = std::size_t{1};
    for (int leg : s.legs) expected *= static_cast<std::size_t>(net.wire(leg).dim);
    CHECK(s.entries.size() == expected);
    if (s.role == Role::gate) ++gates;
  }
  CHECK(gates == m + n);

  QaoaOptions two;
  two.rounds = 2;
  CHECK(qaoa_maxcut_network(g, two).vertex_count() == 4 * n + 2 * m);
  CHECK_THROWS_AS(qaoa_maxcut_network(Graph(1)), ParameterError);
}

TEST_CASE("decomposed cost gates give the same amplitude") {
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    Graph g = random_regular(3, 6, t);
    QaoaOptions a;
    a.gamma = rng.unit() * 3;
    a.beta = rng.unit() * 3;
    for (int q = 0; q < 6; ++q) a.terminal.push_back(static_cast<int>(rng.below(2)));
    QaoaOptions b = a;
    b.decompose_cost = true;
    const auto x = statevector_oracle(qaoa_maxcut_network(g, a));
    const auto y = statevector_oracle(qaoa_maxcut_network(g, b));
    CHECK(std::abs(x - y) < 1e-12);
  }
}

TEST_CASE("QAOA amplitude against a closed form") {
  // Single edge, one round: <00| U_B U_C |++> has an analytic value.
  Graph g(2);
  g.add_edge(0, 1);
  QaoaOptions o;
  o.gamma = 0.7;
  o.beta = 0.2;
  const auto net = qaoa_maxcut_network(g, o);
  const double c = std::cos(o.beta), s = std::sin(o.beta);
  const cplx e(std::cos(o.gamma), -std::sin(o.gamma));
  const cplx i(0.0, 1.0);
  // Rx(b) on both qubits, row 0: (c, -is) per qubit; cost phases 1, e, e, 1.
  const cplx expected = 0.5 * (c * c * 1.0 + c * (-i * s) * e + (-i * s) * c * e + (-i * s) * (-i * s) * 1.0);
  CHECK(std::abs(statevector_oracle(net) - expected) < 1e-12);
}
