#include "tenseq/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "tenseq/errors.hpp"
#include "tenseq/rng.hpp"

namespace tenseq {

Graph::Graph(int n) {
  if (n < 0) throw ParameterError("negative vertex count");
  adj_.resize(static_cast<std::size_t>(n));
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

void Graph::check_vertex(int v) const {
  if (v < 0 || v >= n()) throw ContractViolation("vertex " + std::to_string(v) + " out of range");
}

bool Graph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw ContractViolation("self-loop on vertex " + std::to_string(u));
  auto& au = adj_[static_cast<std::size_t>(u)];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it != au.end() && *it == v) return false;
  au.insert(it, v);
  auto& av = adj_[static_cast<std::size_t>(v)];
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  ++m_;
  return true;
}

bool Graph::has_edge(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  const auto& au = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(au.begin(), au.end(), v);
}

int Graph::max_degree() const {
  int d = 0;
  for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
  return d;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(m_);
  for (int u = 0; u < n(); ++u)
    for (int v : adj_[static_cast<std::size_t>(u)])
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::vector<std::vector<int>> Graph::components() const {
  std::vector<std::vector<int>> comps;
  std::vector<char> seen(adj_.size(), 0);
  for (int s = 0; s < n(); ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<int> comp{s};
    seen[static_cast<std::size_t>(s)] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (int w : adj_[static_cast<std::size_t>(comp[i])])
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          comp.push_back(w);
        }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool Graph::is_connected() const { return n() <= 1 || components().size() == 1; }

Graph Graph::induced(const std::vector<int>& verts) const {
  std::vector<int> pos(adj_.size(), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    check_vertex(verts[i]);
    pos[static_cast<std::size_t>(verts[i])] = static_cast<int>(i);
  }
  Graph h(static_cast<int>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (int w : adj_[static_cast<std::size_t>(verts[i])]) {
      int j = pos[static_cast<std::size_t>(w)];
      if (j > static_cast<int>(i)) h.add_edge(static_cast<int>(i), j);
    }
  return h;
}

namespace {
const std::pair<Role, const char*> kRoleNames[] = {
    {Role::generic, "generic"}, {Role::unitary, "unitary"}, {Role::isometry, "isometry"},
    {Role::op, "operator"},     {Role::state, "state"},     {Role::gate, "gate"},
    {Role::projector, "projector"}};
}

std::string to_string(Role role) {
  for (auto& [r, name] : kRoleNames)
    if (r == role) return name;
  return "generic";
}

Role role_from_string(const std::string& name) {
  for (auto& [r, n] : kRoleNames)
    if (name == n) return r;
  throw ParameterError("unknown role '" + name + "'");
}

void TensorNetwork::claim_id(int id) {
  if (id < 0) throw ContractViolation("negative wire id");
  if (used_ids_.count(id)) throw ContractViolation("duplicate wire id " + std::to_string(id));
  used_ids_[id] = true;
  next_id_ = std::max(next_id_, id + 1);
}

int TensorNetwork::add_vertex(TensorSlot slot) {
  vertices_.push_back(std::move(slot));
  incident_.emplace_back();
  return static_cast<int>(vertices_.size()) - 1;
}

int TensorNetwork::add_wire(int u, int v, int dim) {
  int id = next_id_;
  add_wire_with_id(id, u, v, dim);
  return id;
}

void TensorNetwork::add_wire_with_id(int id, int u, int v, int dim) {
  if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
    throw ContractViolation("wire " + std::to_string(id) + " references a missing vertex");
  if (u == v && !allow_self_loops_)
    throw ContractViolation("self-loop wire " + std::to_string(id) + " not allowed");
  if (dim < 1) throw ContractViolation("wire dimension must be positive");
  claim_id(id);
  index_[id] = wires_.size();
  incident_[static_cast<std::size_t>(u)].push_back(wires_.size());
  if (v != u) incident_[static_cast<std::size_t>(v)].push_back(wires_.size());
  wires_.push_back({id, u, v, dim});
}

int TensorNetwork::add_open_leg(int vertex, int dim) {
  int id = next_id_;
  add_open_leg_with_id(id, vertex, dim);
  return id;
}

void TensorNetwork::add_open_leg_with_id(int id, int vertex, int dim) {
  if (vertex < 0 || vertex >= vertex_count()) throw ContractViolation("open leg on a missing vertex");
  claim_id(id);
  open_legs_.push_back({vertex, id, dim});
}

std::size_t TensorNetwork::wire_index(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ContractViolation("wire id " + std::to_string(id) + " not in network");
  return it->second;
}

int TensorNetwork::arity(int v) const {
  int a = 0;
  for (std::size_t i : incident(v)) a += wires_[i].u == wires_[i].v ? 2 : 1;
  for (const auto& leg : open_legs_)
    if (leg.vertex == v) ++a;
  return a;
}

void TensorNetwork::validate() const {
  for (int v = 0; v < vertex_count(); ++v) {
    const auto& slot = vertices_[static_cast<std::size_t>(v)];
    int a = arity(v);
    if (slot.rank && *slot.rank != a)
      throw ContractViolation("vertex " + std::to_string(v) + " rank annotation " +
                              std::to_string(*slot.rank) + " differs from arity " + std::to_string(a));
  }
}

LineGraphMap line_graph(const TensorNetwork& net, bool skip_loops) {
  LineGraphMap map;
  std::vector<int> vertex_of_index(net.wire_count(), -1);
  for (std::size_t i = 0; i < net.wire_count(); ++i) {
    const Wire& w = net.wires()[i];
    if (skip_loops && w.u == w.v) continue;
    vertex_of_index[i] = static_cast<int>(map.wire_of_vertex.size());
    map.vertex_of_wire[w.id] = vertex_of_index[i];
    map.wire_of_vertex.push_back(w.id);
  }
  if (map.wire_of_vertex.empty()) throw ContractViolation("no contractible wires");
  map.line_graph = Graph(static_cast<int>(map.wire_of_vertex.size()));
  for (int v = 0; v < net.vertex_count(); ++v) {
    const auto& inc = net.incident(v);
    for (std::size_t a = 0; a < inc.size(); ++a)
      for (std::size_t b = a + 1; b < inc.size(); ++b) {
        int x = vertex_of_index[inc[a]];
        int y = vertex_of_index[inc[b]];
        if (x >= 0 && y >= 0) map.line_graph.add_edge(x, y);
      }
  }
  return map;
}

SimpleGraph to_simple(const TensorNetwork& net) {
  SimpleGraph s;
  s.graph = Graph(net.vertex_count());
  for (const auto& w : net.wires()) {
    if (w.u == w.v) {
      ++s.dropped_loops;
      continue;
    }
    s.graph.add_edge(w.u, w.v);
    ++s.multiplicity[{std::min(w.u, w.v), std::max(w.u, w.v)}];
  }
  return s;
}

Graph random_regular(int r, int n, std::uint64_t seed) {
  if (r < 1 || n < 2 || r >= n) throw ParameterError("random_regular requires 1 <= r < n");
  if ((static_cast<long long>(r) * n) % 2 != 0) throw ParameterError("r*n must be even");
  Rng rng(seed);
  std::vector<int> points(static_cast<std::size_t>(r) * static_cast<std::size_t>(n));
  constexpr int kAttempts = 10000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<int>(i) / r;
    rng.shuffle(points);
    Graph g(n);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < points.size() && ok; i += 2) {
      int u = points[i];
      int v = points[i + 1];
      ok = u != v && g.add_edge(u, v);
    }
    if (ok && g.is_connected()) return g;
  }
  throw GenerationError("no simple connected " + std::to_string(r) + "-regular graph on " + std::to_string(n) +
                        " vertices within " + std::to_string(kAttempts) + " attempts");
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

long long parse_int(const std::string& tok, std::size_t line) {
  if (tok.empty()) throw ParseError(line, "empty integer");
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected integer, found '" + tok + "'");
  }
  if (pos != tok.size()) throw ParseError(line, "expected integer, found '" + tok + "'");
  return v;
}

}  // namespace

Graph read_gr(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_problem = false;
  long long n = 0;
  long long m = 0;
  long long edges_read = 0;
  Graph g;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "p") {
      if (have_problem) throw ParseError(lineno, "duplicate problem line");
      if (tok.size() != 4 || tok[1] != "tw") throw ParseError(lineno, "malformed header, expected 'p tw <n> <m>'");
      n = parse_int(tok[2], lineno);
      m = parse_int(tok[3], lineno);
      if (n < 0 || m < 0) throw ParseError(lineno, "negative counts in header");
      g = Graph(static_cast<int>(n));
      have_problem = true;
      continue;
    }
    if (!have_problem) throw ParseError(lineno, "edge before problem line");
    if (tok.size() != 2) throw ParseError(lineno, "edge line must have two vertices");
    long long u = parse_int(tok[0], lineno);
    long long v = parse_int(tok[1], lineno);
    if (u < 1 || u > n || v < 1 || v > n) throw ParseError(lineno, "vertex index out of range");
    if (u == v) throw ParseError(lineno, "self-loop");
    if (!g.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1))) throw ParseError(lineno, "duplicate edge");
    ++edges_read;
  }
  if (!have_problem) throw ParseError(lineno, "missing problem line");
  if (edges_read != m)
    throw ParseError(lineno, "header announces " + std::to_string(m) + " edges, found " + std::to_string(edges_read));
  return g;
}

std::string write_gr(const Graph& g) {
  std::string out = "p tw " + std::to_string(g.n()) + " " + std::to_string(g.edge_count()) + "\n";
  for (auto [u, v] : g.edges()) out += std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string graph_hash(const Graph& g) { return hex64(fnv1a(write_gr(g))); }

std::string network_hash(const TensorNetwork& net) {
  std::string s = "n " + std::to_string(net.vertex_count()) + "\n";
  for (const auto& v : net.vertices()) s += "r " + to_string(v.role) + "\n";
  for (const auto& w : net.wires())
    s += "w " + std::to_string(w.id) + " " + std::to_string(w.u) + " " + std::to_string(w.v) + " " +
         std::to_string(w.dim) + "\n";
  for (const auto& l : net.open_legs())
    s += "o " + std::to_string(l.id) + " " + std::to_string(l.vertex) + " " + std::to_string(l.dim) + "\n";
  return hex64(fnv1a(s));
}

TensorNetwork network_from_graph(const Graph& g) {
  TensorNetwork net;
  for (int v = 0; v < g.n(); ++v) net.add_vertex();
  for (auto [u, v] : g.edges()) net.add_wire(u, v);
  return net;
}

}  // namespace tenseq
