#include "tenseq/decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "tenseq/bitset.hpp"
#include "tenseq/errors.hpp"
#include "tenseq/rng.hpp"

namespace tenseq {

int TreeDecomposition::width() const {
  int w = -1;
  for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

namespace {

void require_permutation(const Graph& g, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != g.n()) throw ContractViolation("ordering length differs from vertex count");
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  for (int v : order) {
    if (v < 0 || v >= g.n() || seen[static_cast<std::size_t>(v)])
      throw ContractViolation("ordering is not a permutation");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

std::vector<DynBitset> bit_adjacency(const Graph& g) {
  std::vector<DynBitset> adj(static_cast<std::size_t>(g.n()), DynBitset(static_cast<std::size_t>(g.n())));
  for (int v = 0; v < g.n(); ++v)
    for (int w : g.neighbors(v)) adj[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(w));
  return adj;
}

// Higher-numbered fill neighbors of each vertex, in elimination position order.
std::vector<DynBitset> eliminate(const Graph& g, const std::vector<int>& order) {
  auto adj = bit_adjacency(g);
  DynBitset alive(static_cast<std::size_t>(g.n()));
  for (int v = 0; v < g.n(); ++v) alive.set(static_cast<std::size_t>(v));
  std::vector<DynBitset> higher(static_cast<std::size_t>(g.n()));
  for (int v : order) {
    auto& av = adj[static_cast<std::size_t>(v)];
    alive.reset(static_cast<std::size_t>(v));
    av &= alive;
    av.for_each([&](std::size_t u) {
      adj[u] |= av;
      adj[u].reset(u);
    });
    higher[static_cast<std::size_t>(v)] = av;
  }
  return higher;
}

}  // namespace

FillIn fill_in_width(const Graph& g, const std::vector<int>& order) {
  require_permutation(g, order);
  auto higher = eliminate(g, order);
  FillIn f;
  f.fill_graph = g;
  for (int v = 0; v < g.n(); ++v) {
    const auto& h = higher[static_cast<std::size_t>(v)];
    f.width = std::max(f.width, static_cast<int>(h.count()));
    auto hv = h.to_vector();
    for (std::size_t a = 0; a < hv.size(); ++a)
      for (std::size_t b = a + 1; b < hv.size(); ++b) f.fill_graph.add_edge(hv[a], hv[b]);
  }
  return f;
}

int ordering_width(const Graph& g, const std::vector<int>& order) {
  require_permutation(g, order);
  int w = 0;
  for (const auto& h : eliminate(g, order)) w = std::max(w, static_cast<int>(h.count()));
  return w;
}

TreeDecomposition eo_to_td(const Graph& g, const std::vector<int>& order) {
  require_permutation(g, order);
  if (g.n() == 0) throw ParameterError("empty graph has no tree decomposition");
  auto higher = eliminate(g, order);
  std::vector<int> pos(static_cast<std::size_t>(g.n()));
  for (int i = 0; i < g.n(); ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
  TreeDecomposition td;
  td.vertex_count = g.n();
  td.bags.resize(order.size());
  std::vector<int> roots;
  for (int i = 0; i < g.n(); ++i) {
    int v = order[static_cast<std::size_t>(i)];
    auto& bag = td.bags[static_cast<std::size_t>(i)];
    bag = higher[static_cast<std::size_t>(v)].to_vector();
    int parent = -1;
    for (int u : bag)
      if (parent < 0 || pos[static_cast<std::size_t>(u)] < parent) parent = pos[static_cast<std::size_t>(u)];
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    if (parent >= 0)
      td.edges.emplace_back(i, parent);
    else
      roots.push_back(i);
  }
  for (std::size_t r = 1; r < roots.size(); ++r) td.edges.emplace_back(roots[r - 1], roots[r]);
  return td;
}

TdReport validate_td(const Graph& g, const TreeDecomposition& td) {
  TdReport rep;
  auto fail = [&](TdCondition c, std::string msg, std::vector<int> witness) {
    rep.ok = false;
    rep.condition = c;
    rep.message = std::move(msg);
    rep.witness = std::move(witness);
    return rep;
  };
  const int nodes = static_cast<int>(td.bags.size());
  if (nodes == 0) return fail(TdCondition::tree, "decomposition has no nodes", {});
  if (static_cast<int>(td.edges.size()) != nodes - 1)
    return fail(TdCondition::tree, "tree must have nodes-1 edges", {static_cast<int>(td.edges.size())});
  std::vector<std::vector<int>> tadj(static_cast<std::size_t>(nodes));
  for (auto [a, b] : td.edges) {
    if (a < 0 || b < 0 || a >= nodes || b >= nodes || a == b)
      return fail(TdCondition::tree, "tree edge references an invalid node", {a, b});
    tadj[static_cast<std::size_t>(a)].push_back(b);
    tadj[static_cast<std::size_t>(b)].push_back(a);
  }
  {
    std::vector<char> seen(static_cast<std::size_t>(nodes), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : tadj[static_cast<std::size_t>(x)])
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          ++reached;
          stack.push_back(y);
        }
    }
    if (reached != nodes) return fail(TdCondition::tree, "tree is disconnected", {});
  }
  std::vector<std::vector<int>> nodes_of(static_cast<std::size_t>(g.n()));
  for (int t = 0; t < nodes; ++t)
    for (int v : td.bags[static_cast<std::size_t>(t)]) {
      if (v < 0 || v >= g.n()) return fail(TdCondition::tree, "bag references a vertex outside the graph", {t, v});
      auto& nv = nodes_of[static_cast<std::size_t>(v)];
      if (!nv.empty() && nv.back() == t) return fail(TdCondition::tree, "bag lists a vertex twice", {t, v});
      nv.push_back(t);
    }
  for (int v = 0; v < g.n(); ++v)
    if (nodes_of[static_cast<std::size_t>(v)].empty())
      return fail(TdCondition::vertex_coverage, "vertex " + std::to_string(v) + " is in no bag", {v});
  for (auto [u, v] : g.edges()) {
    const auto& a = nodes_of[static_cast<std::size_t>(u)];
    const auto& b = nodes_of[static_cast<std::size_t>(v)];
    std::vector<int> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (common.empty())
      return fail(TdCondition::edge_coverage,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) + ") is in no bag", {u, v});
  }
  std::vector<int> mark(static_cast<std::size_t>(nodes), -1);
  for (int v = 0; v < g.n(); ++v) {
    const auto& nv = nodes_of[static_cast<std::size_t>(v)];
    for (int t : nv) mark[static_cast<std::size_t>(t)] = v;
    std::vector<int> stack{nv[0]};
    mark[static_cast<std::size_t>(nv[0])] = -2 - v;
    std::size_t reached = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : tadj[static_cast<std::size_t>(x)])
        if (mark[static_cast<std::size_t>(y)] == v) {
          mark[static_cast<std::size_t>(y)] = -2 - v;
          ++reached;
          stack.push_back(y);
        }
    }
    if (reached != nv.size())
      return fail(TdCondition::connectivity,
                  "bags containing vertex " + std::to_string(v) + " are not connected", {v});
  }
  return rep;
}

EliminationOrdering td_to_eo(const Graph& g, const TreeDecomposition& td) {
  auto rep = validate_td(g, td);
  if (!rep.ok) throw ValidationError("invalid tree decomposition: " + rep.message);
  const int nodes = static_cast<int>(td.bags.size());
  std::vector<std::vector<int>> tadj(static_cast<std::size_t>(nodes));
  std::vector<int> deg(static_cast<std::size_t>(nodes), 0);
  for (auto [a, b] : td.edges) {
    tadj[static_cast<std::size_t>(a)].push_back(b);
    tadj[static_cast<std::size_t>(b)].push_back(a);
    ++deg[static_cast<std::size_t>(a)];
    ++deg[static_cast<std::size_t>(b)];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int t = 0; t < nodes; ++t)
    if (deg[static_cast<std::size_t>(t)] <= 1) leaves.push(t);
  std::vector<char> removed(static_cast<std::size_t>(nodes), 0);
  std::vector<char> placed(static_cast<std::size_t>(g.n()), 0);
  EliminationOrdering eo;
  int remaining = nodes;
  while (!leaves.empty()) {
    int t = leaves.top();
    leaves.pop();
    if (removed[static_cast<std::size_t>(t)]) continue;
    removed[static_cast<std::size_t>(t)] = 1;
    --remaining;
    int parent = -1;
    for (int y : tadj[static_cast<std::size_t>(t)])
      if (!removed[static_cast<std::size_t>(y)]) parent = y;
    const auto& bag = td.bags[static_cast<std::size_t>(t)];
    for (int v : bag) {
      if (placed[static_cast<std::size_t>(v)]) continue;
      bool shared = false;
      if (parent >= 0) {
        const auto& pb = td.bags[static_cast<std::size_t>(parent)];
        shared = std::find(pb.begin(), pb.end(), v) != pb.end();
      }
      if (!shared) {
        placed[static_cast<std::size_t>(v)] = 1;
        eo.order.push_back(v);
      }
    }
    if (parent >= 0 && --deg[static_cast<std::size_t>(parent)] <= 1) leaves.push(parent);
    if (remaining == 0) break;
  }
  eo.width = ordering_width(g, eo.order);
  return eo;
}

namespace {

std::vector<std::uint64_t> tie_priority(int n, std::uint64_t seed) {
  std::vector<std::uint64_t> pri(static_cast<std::size_t>(n));
  std::iota(pri.begin(), pri.end(), 0);
  if (seed != 0) {
    Rng rng(seed);
    rng.shuffle(pri);
  }
  return pri;
}

}  // namespace

EliminationOrdering heuristic_order(const Graph& g, Heuristic strategy, std::uint64_t seed) {
  const int n = g.n();
  auto adj = bit_adjacency(g);
  auto pri = tie_priority(n, seed);
  DynBitset alive(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) alive.set(static_cast<std::size_t>(v));
  auto score_of = [&](int v) -> long long {
    const auto& av = adj[static_cast<std::size_t>(v)];
    if (strategy == Heuristic::min_degree) return static_cast<long long>(av.count());
    long long d = static_cast<long long>(av.count());
    long long present = 0;
    av.for_each([&](std::size_t u) { present += static_cast<long long>(adj[u].count_and(av)); });
    return d * (d - 1) / 2 - present / 2;
  };
  std::vector<long long> score(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) score[static_cast<std::size_t>(v)] = score_of(v);
  EliminationOrdering eo;
  std::vector<char> dirty(static_cast<std::size_t>(n), 0);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (!alive.test(static_cast<std::size_t>(v))) continue;
      if (best < 0 || score[static_cast<std::size_t>(v)] < score[static_cast<std::size_t>(best)] ||
          (score[static_cast<std::size_t>(v)] == score[static_cast<std::size_t>(best)] &&
           pri[static_cast<std::size_t>(v)] < pri[static_cast<std::size_t>(best)]))
        best = v;
    }
    const DynBitset nb = adj[static_cast<std::size_t>(best)];
    eo.width = std::max(eo.width, static_cast<int>(nb.count()));
    eo.order.push_back(best);
    alive.reset(static_cast<std::size_t>(best));
    std::vector<int> touched;
    nb.for_each([&](std::size_t u) {
      adj[u] |= nb;
      adj[u].reset(u);
      adj[u].reset(static_cast<std::size_t>(best));
      touched.push_back(static_cast<int>(u));
    });
    // Fill scores change within distance two of the eliminated vertex.
    for (int u : touched) {
      dirty[static_cast<std::size_t>(u)] = 1;
      if (strategy == Heuristic::min_fill)
        adj[static_cast<std::size_t>(u)].for_each([&](std::size_t w) { dirty[w] = 1; });
    }
    for (int v = 0; v < n; ++v)
      if (dirty[static_cast<std::size_t>(v)]) {
        dirty[static_cast<std::size_t>(v)] = 0;
        if (alive.test(static_cast<std::size_t>(v))) score[static_cast<std::size_t>(v)] = score_of(v);
      }
  }
  return eo;
}

int lower_bound(const Graph& g, LowerBound method) {
  const int n = g.n();
  if (n == 0) return 0;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) adj[static_cast<std::size_t>(v)] = g.neighbors(v);
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  int lb = 0;
  for (int left = n; left > 0; --left) {
    int v = -1;
    for (int x = 0; x < n; ++x)
      if (alive[static_cast<std::size_t>(x)] &&
          (v < 0 || adj[static_cast<std::size_t>(x)].size() < adj[static_cast<std::size_t>(v)].size()))
        v = x;
    auto& av = adj[static_cast<std::size_t>(v)];
    lb = std::max(lb, static_cast<int>(av.size()));
    alive[static_cast<std::size_t>(v)] = 0;
    auto erase_from = [&](int x, int y) {
      auto& ax = adj[static_cast<std::size_t>(x)];
      ax.erase(std::remove(ax.begin(), ax.end(), y), ax.end());
    };
    if (method == LowerBound::degeneracy || av.empty()) {
      for (int u : av) erase_from(u, v);
      av.clear();
      continue;
    }
    int target = av[0];
    for (int u : av)
      if (adj[static_cast<std::size_t>(u)].size() < adj[static_cast<std::size_t>(target)].size()) target = u;
    for (int u : av) {
      erase_from(u, v);
      if (u == target) continue;
      auto& at = adj[static_cast<std::size_t>(target)];
      if (std::find(at.begin(), at.end(), u) == at.end()) {
        at.push_back(u);
        adj[static_cast<std::size_t>(u)].push_back(target);
      }
    }
    av.clear();
  }
  return lb;
}

std::string write_td(const TreeDecomposition& td, const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << "c " << c << "\n";
  int max_bag = 0;
  for (const auto& b : td.bags) max_bag = std::max(max_bag, static_cast<int>(b.size()));
  out << "s td " << td.bags.size() << " " << max_bag << " " << td.vertex_count << "\n";
  for (std::size_t t = 0; t < td.bags.size(); ++t) {
    out << "b " << t + 1;
    for (int v : td.bags[t]) out << " " << v + 1;
    out << "\n";
  }
  auto edges = td.edges;
  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  for (auto [a, b] : edges) out << a + 1 << " " << b + 1 << "\n";
  return out.str();
}

TreeDecomposition read_td(const std::string& text, std::vector<std::string>* comments) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_solution = false;
  long long nbags = 0;
  long long max_bag = 0;
  std::vector<char> bag_seen;
  TreeDecomposition td;
  auto to_int = [&](const std::string& tok) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      throw ParseError(lineno, "expected integer, found '" + tok + "'");
    }
    if (pos != tok.size()) throw ParseError(lineno, "expected integer, found '" + tok + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "c") {
      if (comments) comments->push_back(line.size() > 2 ? line.substr(2) : std::string());
      continue;
    }
    if (tok[0] == "s") {
      if (have_solution) throw ParseError(lineno, "duplicate solution line");
      if (tok.size() != 5 || tok[1] != "td") throw ParseError(lineno, "malformed solution line");
      nbags = to_int(tok[2]);
      max_bag = to_int(tok[3]);
      long long n = to_int(tok[4]);
      if (nbags < 0 || max_bag < 0 || n < 0) throw ParseError(lineno, "negative count in solution line");
      td.vertex_count = static_cast<int>(n);
      td.bags.assign(static_cast<std::size_t>(nbags), {});
      bag_seen.assign(static_cast<std::size_t>(nbags), 0);
      have_solution = true;
      continue;
    }
    if (!have_solution) throw ParseError(lineno, "content before solution line");
    if (tok[0] == "b") {
      if (tok.size() < 2) throw ParseError(lineno, "bag line without id");
      long long id = to_int(tok[1]);
      if (id < 1 || id > nbags) throw ParseError(lineno, "bag id out of range");
      if (bag_seen[static_cast<std::size_t>(id - 1)]) throw ParseError(lineno, "duplicate bag id");
      bag_seen[static_cast<std::size_t>(id - 1)] = 1;
      auto& bag = td.bags[static_cast<std::size_t>(id - 1)];
      for (std::size_t i = 2; i < tok.size(); ++i) {
        long long v = to_int(tok[i]);
        if (v < 1 || v > td.vertex_count) throw ParseError(lineno, "vertex index out of range");
        bag.push_back(static_cast<int>(v - 1));
      }
      if (static_cast<long long>(bag.size()) > max_bag) throw ParseError(lineno, "bag exceeds announced size");
      std::sort(bag.begin(), bag.end());
      continue;
    }
    if (tok.size() != 2) throw ParseError(lineno, "tree edge line must have two bag ids");
    long long a = to_int(tok[0]);
    long long b = to_int(tok[1]);
    if (a < 1 || a > nbags || b < 1 || b > nbags) throw ParseError(lineno, "tree edge bag id out of range");
    td.edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
  }
  if (!have_solution) throw ParseError(lineno, "missing solution line");
  for (std::size_t i = 0; i < bag_seen.size(); ++i)
    if (!bag_seen[i]) throw ParseError(lineno, "bag " + std::to_string(i + 1) + " never listed");
  return td;
}

}  // namespace tenseq
