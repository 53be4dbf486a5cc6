#include "tenseq/contraction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "tenseq/errors.hpp"

namespace tenseq {

namespace {

int find(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

int count_components(const TensorNetwork& net) {
  std::vector<int> parent(static_cast<std::size_t>(net.vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  int comps = net.vertex_count();
  for (const auto& w : net.wires()) {
    int a = find(parent, w.u);
    int b = find(parent, w.v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --comps;
    }
  }
  return comps;
}

}  // namespace

SequenceEvaluation evaluate_order(const TensorNetwork& net, const std::vector<int>& wire_order) {
  SequenceEvaluation ev;
  const std::size_t m = net.wire_count();
  std::vector<char> consumed(m, 0);
  std::vector<char> listed(m, 0);
  for (int id : wire_order) {
    std::size_t i = net.wire_index(id);
    if (listed[i]) throw ContractViolation("wire " + std::to_string(id) + " listed twice");
    listed[i] = 1;
  }
  std::vector<int> parent(static_cast<std::size_t>(net.vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  // Live wires incident to each group representative.
  std::vector<int> live(static_cast<std::size_t>(net.vertex_count()), 0);
  for (std::size_t i = 0; i < m; ++i) {
    const Wire& w = net.wires()[i];
    if (w.u == w.v) {
      consumed[i] = 1;
      ev.skipped.push_back(w.id);
      continue;
    }
    ++live[static_cast<std::size_t>(w.u)];
    ++live[static_cast<std::size_t>(w.v)];
  }
  int groups = net.vertex_count();
  for (int id : wire_order) {
    std::size_t i = net.wire_index(id);
    if (consumed[i]) {
      if (std::find(ev.skipped.begin(), ev.skipped.end(), id) == ev.skipped.end()) ev.skipped.push_back(id);
      continue;
    }
    const Wire& w = net.wires()[i];
    int a = find(parent, w.u);
    int b = find(parent, w.v);
    std::vector<int> between;
    for (std::size_t j = 0; j < m; ++j) {
      if (consumed[j]) continue;
      const Wire& x = net.wires()[j];
      int xa = find(parent, x.u);
      int xb = find(parent, x.v);
      if ((xa == a && xb == b) || (xa == b && xb == a)) between.push_back(static_cast<int>(j));
    }
    int degree = live[static_cast<std::size_t>(a)] + live[static_cast<std::size_t>(b)] -
                 static_cast<int>(between.size()) - 1;
    parent[static_cast<std::size_t>(a)] = b;
    live[static_cast<std::size_t>(b)] =
        live[static_cast<std::size_t>(a)] + live[static_cast<std::size_t>(b)] - 2 * static_cast<int>(between.size());
    --groups;
    std::vector<int> used{id};
    for (int j : between) {
      consumed[static_cast<std::size_t>(j)] = 1;
      int jid = net.wires()[static_cast<std::size_t>(j)].id;
      if (jid != id) {
        used.push_back(jid);
        ev.skipped.push_back(jid);
      }
    }
    ev.steps.push_back(id);
    ev.step_degrees.push_back(degree);
    ev.consumed.push_back(std::move(used));
    ev.complexity = std::max(ev.complexity, degree);
  }
  ev.groups_left = groups;
  ev.components = count_components(net);
  return ev;
}

int evaluate_sequence(const TensorNetwork& net, const ContractionSequence& seq) {
  return evaluate_order(net, seq.steps).complexity;
}

ContractionSequence make_sequence(const TensorNetwork& net, const std::vector<int>& wire_order) {
  auto ev = evaluate_order(net, wire_order);
  ContractionSequence seq;
  seq.steps = std::move(ev.steps);
  seq.skipped = std::move(ev.skipped);
  seq.complexity = ev.complexity;
  seq.network_hash = network_hash(net);
  return seq;
}

ContractionSequence td_to_sequence(const TensorNetwork& net, const TreeDecomposition& td, const LineGraphMap& map) {
  auto eo = td_to_eo(map.line_graph, td);
  std::vector<int> order;
  order.reserve(eo.order.size());
  for (int v : eo.order) order.push_back(map.wire_of_vertex[static_cast<std::size_t>(v)]);
  return make_sequence(net, order);
}

EliminationOrdering sequence_to_eo(const TensorNetwork& net, const ContractionSequence& seq, const LineGraphMap& map) {
  auto ev = evaluate_order(net, seq.steps);
  const int n = map.line_graph.n();
  std::vector<char> placed(static_cast<std::size_t>(n), 0);
  EliminationOrdering eo;
  auto place = [&](int wire) {
    auto it = map.vertex_of_wire.find(wire);
    if (it == map.vertex_of_wire.end()) return;
    if (placed[static_cast<std::size_t>(it->second)]) return;
    placed[static_cast<std::size_t>(it->second)] = 1;
    eo.order.push_back(it->second);
  };
  for (const auto& used : ev.consumed)
    for (int wire : used) place(wire);
  for (int v = 0; v < n; ++v)
    if (!placed[static_cast<std::size_t>(v)]) eo.order.push_back(v);
  eo.width = ordering_width(map.line_graph, eo.order);
  return eo;
}

CcResult optimal_cc(const TensorNetwork& net, const ExactOptions& options) {
  CcResult res;
  res.map = line_graph(net, true);
  res.solver = treewidth_exact(res.map.line_graph, options);
  res.sequence = td_to_sequence(net, res.solver.td, res.map);
  res.cc = res.sequence.complexity;
  res.optimal = res.solver.optimal;
  res.timed_out = res.solver.timed_out;
  res.lower_bound = res.solver.lower_bound;
  res.sequence.optimal = res.optimal;
  if (res.optimal && res.cc != res.solver.width)
    throw ContractViolation("sequence complexity " + std::to_string(res.cc) + " differs from line-graph treewidth " +
                            std::to_string(res.solver.width));
  return res;
}

int brute_force_cc(const TensorNetwork& net) {
  if (net.wire_count() > 9) throw RefusalError("brute_force_cc is limited to 9 wires");
  struct E {
    int u, v;
  };
  std::vector<E> wires;
  for (const auto& w : net.wires())
    if (w.u != w.v) wires.push_back({w.u, w.v});
  const int n = net.vertex_count();
  std::map<std::vector<int>, int> memo;
  // State: group label per vertex, normalized by first occurrence.
  auto normalize = [&](std::vector<int> g) {
    std::vector<int> relabel(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (auto& x : g) {
      if (relabel[static_cast<std::size_t>(x)] < 0) relabel[static_cast<std::size_t>(x)] = next++;
      x = relabel[static_cast<std::size_t>(x)];
    }
    return g;
  };
  auto solve = [&](auto& self, const std::vector<int>& groups) -> int {
    auto it = memo.find(groups);
    if (it != memo.end()) return it->second;
    int best = -1;
    std::vector<std::pair<int, int>> tried;
    for (const auto& e : wires) {
      int a = groups[static_cast<std::size_t>(e.u)];
      int b = groups[static_cast<std::size_t>(e.v)];
      if (a == b) continue;
      auto key = std::minmax(a, b);
      if (std::find(tried.begin(), tried.end(), std::pair<int, int>(key.first, key.second)) != tried.end()) continue;
      tried.emplace_back(key.first, key.second);
      int incident = 0;
      int between = 0;
      for (const auto& f : wires) {
        int fa = groups[static_cast<std::size_t>(f.u)];
        int fb = groups[static_cast<std::size_t>(f.v)];
        if (fa == fb) continue;
        bool touch_a = fa == a || fb == a;
        bool touch_b = fa == b || fb == b;
        if (touch_a && touch_b)
          ++between;
        else if (touch_a || touch_b)
          ++incident;
      }
      int degree = incident + between - 1;
      std::vector<int> next = groups;
      for (auto& x : next)
        if (x == a) x = b;
      int cost = std::max(degree, self(self, normalize(next)));
      if (best < 0 || cost < best) best = cost;
    }
    if (best < 0) best = 0;
    memo.emplace(groups, best);
    return best;
  };
  std::vector<int> start(static_cast<std::size_t>(n));
  std::iota(start.begin(), start.end(), 0);
  return solve(solve, start);
}

std::string write_sequence_json(const ContractionSequence& seq, int indent) {
  nlohmann::json j = {{"network", seq.network_hash},
                      {"steps", seq.steps},
                      {"skipped", seq.skipped},
                      {"complexity", seq.complexity},
                      {"optimal", seq.optimal}};
  return j.dump(indent);
}

ContractionSequence read_sequence_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    ContractionSequence seq;
    seq.network_hash = j.value("network", std::string());
    seq.steps = j.at("steps").get<std::vector<int>>();
    if (j.contains("skipped")) seq.skipped = j.at("skipped").get<std::vector<int>>();
    seq.complexity = j.value("complexity", 0);
    seq.optimal = j.value("optimal", false);
    return seq;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("sequence JSON: ") + e.what());
  }
}

}  // namespace tenseq
