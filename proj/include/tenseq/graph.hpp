#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tenseq {

// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const noexcept { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const noexcept { return m_; }

  // Inserts {u,v}; returns false when already present. Loops are rejected.
  bool add_edge(int u, int v);
  bool has_edge(int u, int v) const;
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
  int max_degree() const;

  // Edges with u < v in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;

  bool is_connected() const;
  std::vector<std::vector<int>> components() const;

  // Subgraph induced by verts; vertex i of the result is verts[i].
  Graph induced(const std::vector<int>& verts) const;

  bool operator==(const Graph& o) const { return adj_ == o.adj_; }

 private:
  void check_vertex(int v) const;
  std::vector<std::vector<int>> adj_;
  std::size_t m_ = 0;
};

enum class Role { generic, unitary, isometry, op, state, gate, projector };

std::string to_string(Role role);
Role role_from_string(const std::string& name);

struct Wire {
  int id = 0;
  int u = 0;
  int v = 0;
  int dim = 2;
};

struct OpenLeg {
  int vertex = 0;
  int id = 0;
  int dim = 2;
};

// One tensor of a network. legs and entries are optional numeric payload:
// when entries is non-empty, legs lists the incident wire and open leg ids in
// row-major order of entries.
struct TensorSlot {
  Role role = Role::generic;
  std::optional<int> rank;
  std::string label;
  std::vector<int> qubits;
  int layer = -1;
  std::vector<int> legs;
  std::vector<std::complex<double>> entries;
};

// Multigraph of tensors. Wire and open leg ids share one id space and are
// never reused; vertex ids are dense.
class TensorNetwork {
 public:
  explicit TensorNetwork(bool allow_self_loops = false) : allow_self_loops_(allow_self_loops) {}

  int add_vertex(TensorSlot slot = {});
  int add_wire(int u, int v, int dim = 2);
  void add_wire_with_id(int id, int u, int v, int dim = 2);
  int add_open_leg(int vertex, int dim = 2);
  void add_open_leg_with_id(int id, int vertex, int dim = 2);

  int vertex_count() const noexcept { return static_cast<int>(vertices_.size()); }
  std::size_t wire_count() const noexcept { return wires_.size(); }
  const std::vector<TensorSlot>& vertices() const noexcept { return vertices_; }
  TensorSlot& vertex(int v) { return vertices_.at(static_cast<std::size_t>(v)); }
  const TensorSlot& vertex(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  const std::vector<Wire>& wires() const noexcept { return wires_; }
  const std::vector<OpenLeg>& open_legs() const noexcept { return open_legs_; }
  bool allow_self_loops() const noexcept { return allow_self_loops_; }

  bool has_wire(int id) const { return index_.count(id) != 0; }
  // Position of wire id in wires(); throws ContractViolation when absent.
  std::size_t wire_index(int id) const;
  const Wire& wire(int id) const { return wires_[wire_index(id)]; }

  // Indices into wires() of wires incident to v (a loop appears once).
  const std::vector<std::size_t>& incident(int v) const { return incident_[static_cast<std::size_t>(v)]; }
  // Wire ends at v plus open legs at v; a loop contributes two ends.
  int arity(int v) const;

  int next_id() const noexcept { return next_id_; }

  // Throws ContractViolation when a documented invariant fails.
  void validate() const;

 private:
  void claim_id(int id);
  bool allow_self_loops_;
  std::vector<TensorSlot> vertices_;
  std::vector<Wire> wires_;
  std::vector<OpenLeg> open_legs_;
  std::vector<std::vector<std::size_t>> incident_;
  std::unordered_map<int, std::size_t> index_;
  std::unordered_map<int, bool> used_ids_;
  int next_id_ = 0;
};

struct LineGraphMap {
  Graph line_graph;
  std::vector<int> wire_of_vertex;
  std::unordered_map<int, int> vertex_of_wire;
};

// Vertices of the result are the wires in network order. skip_loops leaves
// self-loop wires out of the graph.
LineGraphMap line_graph(const TensorNetwork& net, bool skip_loops = false);

struct SimpleGraph {
  Graph graph;
  std::map<std::pair<int, int>, int> multiplicity;
  int dropped_loops = 0;
};

SimpleGraph to_simple(const TensorNetwork& net);

// Connected simple r-regular graph from the pairing model.
Graph random_regular(int r, int n, std::uint64_t seed);

Graph read_gr(const std::string& text);
std::string write_gr(const Graph& g);

std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t value);
// Structural fingerprint of a graph or network; numeric entries do not enter.
std::string graph_hash(const Graph& g);
std::string network_hash(const TensorNetwork& net);

// Network JSON text, including numeric entries when present.
std::string write_network_json(const TensorNetwork& net, int indent = -1);
TensorNetwork read_network_json(const std::string& text);

// Network whose tensors are the vertices of g and whose wires are its edges.
TensorNetwork network_from_graph(const Graph& g);

}  // namespace tenseq
