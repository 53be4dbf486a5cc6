#pragma once

// Instance families and exhaustive oracles shared by the unit tests and the
// acceptance runner. The oracles use none of the library's algorithms.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "tenseq/graph.hpp"
#include "tenseq/rng.hpp"

namespace tenseq::testing {

inline Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph cycle_graph(int n) {
  Graph g = path_graph(n);
  g.add_edge(n - 1, 0);
  return g;
}

inline Graph complete_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

inline Graph grid_graph(int rows, int cols) {
  Graph g(rows * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(r * cols + c, r * cols + c + 1);
      if (r + 1 < rows) g.add_edge(r * cols + c, (r + 1) * cols + c);
    }
  return g;
}

// Connected G(n, p) by rejection, with a spanning path as fallback.
inline Graph random_connected_graph(int n, double p, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.unit() < p) g.add_edge(u, v);
    if (g.is_connected()) return g;
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]);
  return g;
}

// Connected multigraph network with at most max_wires wires. Topology cycles
// through path, cycle, clique, random tree plus extras, and random with
// parallel wires.
inline TensorNetwork random_network(int max_wires, Rng& rng, int family) {
  TensorNetwork net;
  auto add_vertices = [&](int n) {
    for (int i = 0; i < n; ++i) net.add_vertex();
  };
  switch (family % 5) {
    case 0: {
      const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_wires)));
      add_vertices(n);
      for (int i = 0; i + 1 < n; ++i) net.add_wire(i, i + 1);
      break;
    }
    case 1: {
      const int n = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_wires - 2)));
      add_vertices(n);
      for (int i = 0; i < n; ++i) net.add_wire(i, (i + 1) % n);
      break;
    }
    case 2: {
      int n = 2;
      while ((n + 1) * n / 2 <= max_wires) ++n;
      n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      add_vertices(n);
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) net.add_wire(u, v);
      break;
    }
    default: {
      const int wires = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_wires)));
      const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(wires)));
      add_vertices(n);
      for (int v = 1; v < n; ++v) net.add_wire(v, static_cast<int>(rng.below(static_cast<std::uint64_t>(v))));
      const bool parallel = family % 5 == 4;
      while (static_cast<int>(net.wire_count()) < wires) {
        int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        if (u == v) continue;
        if (parallel && rng.below(2) == 0) {
          const auto& w = net.wires()[rng.below(net.wire_count())];
          u = w.u;
          v = w.v;
        }
        net.add_wire(u, v);
      }
      break;
    }
  }
  return net;
}

// Width of one elimination ordering, by literal simulation with sets.
inline int oracle_ordering_width(const Graph& g, const std::vector<int>& order) {
  std::vector<std::set<int>> adj(static_cast<std::size_t>(g.n()));
  for (auto [u, v] : g.edges()) {
    adj[static_cast<std::size_t>(u)].insert(v);
    adj[static_cast<std::size_t>(v)].insert(u);
  }
  int width = 0;
  for (int v : order) {
    const auto nb = adj[static_cast<std::size_t>(v)];
    width = std::max(width, static_cast<int>(nb.size()));
    for (int a : nb) {
      adj[static_cast<std::size_t>(a)].erase(v);
      for (int b : nb)
        if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
    }
    adj[static_cast<std::size_t>(v)].clear();
  }
  return width;
}

// Minimum width over every permutation; practical up to 8 vertices.
inline int oracle_treewidth_permutations(const Graph& g) {
  if (g.n() == 0) return -1;
  std::vector<int> order(static_cast<std::size_t>(g.n()));
  std::iota(order.begin(), order.end(), 0);
  int best = g.n();
  do {
    best = std::min(best, oracle_ordering_width(g, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// Minimum width over every ordering, by dynamic programming over the set S
// of already eliminated vertices: eliminating v after S has degree equal to
// the number of vertices outside S + v reachable from v through S.
inline int oracle_treewidth(const Graph& g) {
  const int n = g.n();
  if (n == 0) return -1;
  const std::uint32_t full = (1U << n) - 1;
  auto q_size = [&](std::uint32_t s, int v) {
    std::uint32_t seen = 1U << v;
    std::vector<int> stack{v};
    int count = 0;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : g.neighbors(x)) {
        if (seen & (1U << y)) continue;
        seen |= 1U << y;
        if (s & (1U << y))
          stack.push_back(y);
        else
          ++count;
      }
    }
    return count;
  };
  std::vector<int> best(static_cast<std::size_t>(full) + 1, n);
  best[0] = -1;
  for (std::uint32_t s = 0; s < full; ++s) {
    if (best[s] >= n) continue;
    for (int v = 0; v < n; ++v) {
      if (s & (1U << v)) continue;
      const std::uint32_t t = s | (1U << v);
      const int w = std::max(best[s], q_size(s, v));
      best[t] = std::min(best[t], w);
    }
  }
  return std::max(best[full], 0);
}

// Complexity of one wire order, simulated directly: merging two groups costs
// the number of live wires touching either group minus the trigger; wires
// left inside the merged group are then consumed.
inline int oracle_order_complexity(const TensorNetwork& net, const std::vector<int>& order_of_wires) {
  const auto& wires = net.wires();
  std::vector<int> group(static_cast<std::size_t>(net.vertex_count()));
  std::iota(group.begin(), group.end(), 0);
  std::vector<char> live(wires.size());
  for (std::size_t i = 0; i < wires.size(); ++i) live[i] = wires[i].u != wires[i].v;
  int worst = 0;
  for (int wi : order_of_wires) {
    if (!live[static_cast<std::size_t>(wi)]) continue;
    const int a = group[static_cast<std::size_t>(wires[static_cast<std::size_t>(wi)].u)];
    const int b = group[static_cast<std::size_t>(wires[static_cast<std::size_t>(wi)].v)];
    int touching = 0;
    for (std::size_t i = 0; i < wires.size(); ++i) {
      if (!live[i]) continue;
      const int gu = group[static_cast<std::size_t>(wires[i].u)];
      const int gv = group[static_cast<std::size_t>(wires[i].v)];
      if (gu == a || gu == b || gv == a || gv == b) ++touching;
    }
    worst = std::max(worst, touching - 1);
    for (auto& x : group)
      if (x == b) x = a;
    for (std::size_t i = 0; i < wires.size(); ++i)
      if (live[i] && group[static_cast<std::size_t>(wires[i].u)] == group[static_cast<std::size_t>(wires[i].v)])
        live[i] = 0;
  }
  return worst;
}

// Minimum complexity over every order of the wires (indices into wires()).
inline int oracle_cc(const TensorNetwork& net) {
  std::vector<int> order(net.wire_count());
  std::iota(order.begin(), order.end(), 0);
  int best = -1;
  do {
    const int c = oracle_order_complexity(net, order);
    if (best < 0 || c < best) best = c;
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace tenseq::testing
