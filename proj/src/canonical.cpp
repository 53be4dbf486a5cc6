#include "tenseq/canonical.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace tenseq {

namespace {

struct Colored {
  int n = 0;
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, multiplicity), sorted
  std::vector<std::vector<int>> base;                 // initial color key per vertex
};

// Replaces each vertex key by its rank among the distinct keys.
template <class Key>
std::vector<int> rank_keys(const std::vector<Key>& keys) {
  std::vector<Key> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
  return out;
}

int distinct(const std::vector<int>& c) {
  return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

// Equitable refinement; colors stay dense ranks of isomorphism-invariant keys.
std::vector<int> refine(const Colored& g, std::vector<int> colors) {
  int classes = distinct(colors);
  for (;;) {
    std::vector<std::vector<int>> keys(static_cast<std::size_t>(g.n));
    for (int v = 0; v < g.n; ++v) {
      auto& k = keys[static_cast<std::size_t>(v)];
      k.push_back(colors[static_cast<std::size_t>(v)]);
      std::vector<std::pair<int, int>> nb;
      for (auto [w, mult] : g.adj[static_cast<std::size_t>(v)]) nb.emplace_back(colors[static_cast<std::size_t>(w)], mult);
      std::sort(nb.begin(), nb.end());
      for (auto [c, mult] : nb) {
        k.push_back(c);
        k.push_back(mult);
      }
    }
    auto next = rank_keys(keys);
    int nc = distinct(next);
    colors = std::move(next);
    if (nc == classes) return colors;
    classes = nc;
  }
}

std::vector<int> encode(const Colored& g, const std::vector<int>& pos) {
  std::vector<int> inv(static_cast<std::size_t>(g.n));
  for (int v = 0; v < g.n; ++v) inv[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])] = v;
  std::vector<int> code{g.n};
  for (int p = 0; p < g.n; ++p) {
    const auto& b = g.base[static_cast<std::size_t>(inv[static_cast<std::size_t>(p)])];
    code.push_back(static_cast<int>(b.size()));
    code.insert(code.end(), b.begin(), b.end());
  }
  std::vector<std::tuple<int, int, int>> edges;
  for (int v = 0; v < g.n; ++v)
    for (auto [w, mult] : g.adj[static_cast<std::size_t>(v)]) {
      int a = pos[static_cast<std::size_t>(v)];
      int b = pos[static_cast<std::size_t>(w)];
      if (a < b) edges.emplace_back(a, b, mult);
    }
  std::sort(edges.begin(), edges.end());
  for (auto [a, b, mult] : edges) {
    code.push_back(a);
    code.push_back(b);
    code.push_back(mult);
  }
  return code;
}

void search(const Colored& g, std::vector<int> colors, std::vector<int>& best, bool& have) {
  colors = refine(g, std::move(colors));
  int nc = distinct(colors);
  if (nc == g.n) {
    auto code = encode(g, colors);
    if (!have || code < best) {
      best = std::move(code);
      have = true;
    }
    return;
  }
  std::vector<int> size(static_cast<std::size_t>(nc), 0);
  for (int c : colors) ++size[static_cast<std::size_t>(c)];
  int target = -1;
  for (int c = 0; c < nc; ++c)
    if (size[static_cast<std::size_t>(c)] > 1 &&
        (target < 0 || size[static_cast<std::size_t>(c)] < size[static_cast<std::size_t>(target)]))
      target = c;
  for (int v = 0; v < g.n; ++v) {
    if (colors[static_cast<std::size_t>(v)] != target) continue;
    std::vector<int> next(colors.size());
    for (int u = 0; u < g.n; ++u) next[static_cast<std::size_t>(u)] = 2 * colors[static_cast<std::size_t>(u)] + (u == v ? 0 : 1);
    search(g, rank_keys(next), best, have);
  }
}

std::string canonical(const Colored& g) {
  std::vector<int> best;
  bool have = false;
  if (g.n == 0) return "0";
  search(g, rank_keys(g.base), best, have);
  std::string out;
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(best[i]);
  }
  return out;
}

}  // namespace

std::string canonical_form(const TensorNetwork& net) {
  Colored g;
  g.n = net.vertex_count();
  g.adj.resize(static_cast<std::size_t>(g.n));
  std::vector<int> loops(static_cast<std::size_t>(g.n), 0);
  std::vector<int> open(static_cast<std::size_t>(g.n), 0);
  std::vector<std::map<int, int>> mult(static_cast<std::size_t>(g.n));
  for (const auto& w : net.wires()) {
    if (w.u == w.v) {
      ++loops[static_cast<std::size_t>(w.u)];
      continue;
    }
    ++mult[static_cast<std::size_t>(w.u)][w.v];
    ++mult[static_cast<std::size_t>(w.v)][w.u];
  }
  for (const auto& l : net.open_legs()) ++open[static_cast<std::size_t>(l.vertex)];
  for (int v = 0; v < g.n; ++v) {
    for (auto [w, m] : mult[static_cast<std::size_t>(v)]) g.adj[static_cast<std::size_t>(v)].emplace_back(w, m);
    int deg = 0;
    for (auto [w, m] : mult[static_cast<std::size_t>(v)]) deg += m;
    g.base.push_back({static_cast<int>(net.vertex(v).role), loops[static_cast<std::size_t>(v)],
                      open[static_cast<std::size_t>(v)], deg});
  }
  return canonical(g);
}

std::string canonical_form(const Graph& graph) {
  Colored g;
  g.n = graph.n();
  g.adj.resize(static_cast<std::size_t>(g.n));
  for (int v = 0; v < g.n; ++v) {
    for (int w : graph.neighbors(v)) g.adj[static_cast<std::size_t>(v)].emplace_back(w, 1);
    g.base.push_back({graph.degree(v)});
  }
  return canonical(g);
}

}  // namespace tenseq
