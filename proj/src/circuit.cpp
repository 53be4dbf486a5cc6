#include "tenseq/circuit.hpp"

#include <cmath>

#include "tenseq/errors.hpp"

namespace tenseq {

namespace gates {

std::vector<cplx> hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, s, s, -s};
}

std::vector<cplx> cnot() {
  std::vector<cplx> m(16, 0.0);
  m[0 * 4 + 0] = 1.0;
  m[1 * 4 + 1] = 1.0;
  m[3 * 4 + 2] = 1.0;
  m[2 * 4 + 3] = 1.0;
  return m;
}

std::vector<cplx> zz_phase(double gamma) {
  std::vector<cplx> m(16, 0.0);
  const cplx differ = std::polar(1.0, -gamma);
  for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i * 4 + i)] = (i == 0 || i == 3) ? cplx(1.0) : differ;
  return m;
}

std::vector<cplx> phase(double gamma) { return {1.0, 0.0, 0.0, std::polar(1.0, -gamma)}; }

std::vector<cplx> x_rotation(double beta) {
  const cplx c = std::cos(beta);
  const cplx s = cplx(0.0, -std::sin(beta));
  return {c, s, s, c};
}

}  // namespace gates

Circuit empty_circuit(int qubits) {
  if (qubits < 1) throw ParameterError("circuit needs at least one qubit");
  Circuit c;
  c.qubits = qubits;
  c.initial.assign(static_cast<std::size_t>(qubits), {cplx(1.0), cplx(0.0)});
  c.terminal.assign(static_cast<std::size_t>(qubits), 0);
  return c;
}

TensorNetwork circuit_network(const Circuit& c) {
  const auto nq = static_cast<std::size_t>(c.qubits);
  if (c.initial.size() != nq || c.terminal.size() != nq) throw ParameterError("circuit initial/terminal size mismatch");
  TensorNetwork net;
  std::vector<int> last(nq);
  // Output slot on the last tensor of each worldline, filled when the next
  // tensor attaches.
  std::vector<std::size_t> last_slot(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    TensorSlot s;
    s.role = Role::state;
    s.label = "state q" + std::to_string(q);
    s.qubits = {static_cast<int>(q)};
    s.layer = 0;
    s.legs = {-1};
    s.entries = {c.initial[q][0], c.initial[q][1]};
    last[q] = net.add_vertex(std::move(s));
    last_slot[q] = 0;
  }
  auto attach = [&](int t, std::size_t q, std::size_t in_slot) {
    int w = net.add_wire(last[q], t);
    net.vertex(last[q]).legs[last_slot[q]] = w;
    net.vertex(t).legs[in_slot] = w;
  };
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const Gate& g = c.gates[gi];
    const std::size_t m = g.qubits.size();
    const std::size_t dim = std::size_t{1} << m;
    if (m == 0 || g.matrix.size() != dim * dim) throw ParameterError("gate matrix size mismatch");
    for (std::size_t a = 0; a < m; ++a) {
      if (g.qubits[a] < 0 || g.qubits[a] >= c.qubits) throw ParameterError("gate qubit out of range");
      for (std::size_t b = a + 1; b < m; ++b)
        if (g.qubits[a] == g.qubits[b]) throw ParameterError("gate repeats a qubit");
    }
    TensorSlot s;
    s.role = Role::gate;
    s.label = g.label;
    s.qubits = g.qubits;
    s.layer = static_cast<int>(gi) + 1;
    s.legs.assign(2 * m, -1);
    s.entries.resize(dim * dim);
    for (std::size_t in = 0; in < dim; ++in)
      for (std::size_t out = 0; out < dim; ++out) s.entries[in * dim + out] = g.matrix[out * dim + in];
    int t = net.add_vertex(std::move(s));
    for (std::size_t a = 0; a < m; ++a) {
      auto q = static_cast<std::size_t>(g.qubits[a]);
      attach(t, q, a);
      last[q] = t;
      last_slot[q] = m + a;
    }
  }
  for (std::size_t q = 0; q < nq; ++q) {
    TensorSlot s;
    s.role = Role::projector;
    s.label = "projector q" + std::to_string(q);
    s.qubits = {static_cast<int>(q)};
    s.layer = static_cast<int>(c.gates.size()) + 1;
    s.legs = {-1};
    s.entries = {c.terminal[q] == 0 ? cplx(1.0) : cplx(0.0), c.terminal[q] == 0 ? cplx(0.0) : cplx(1.0)};
    int t = net.add_vertex(std::move(s));
    attach(t, q, 0);
  }
  for (int v = 0; v < net.vertex_count(); ++v) net.vertex(v).rank = static_cast<int>(net.vertex(v).legs.size());
  net.validate();
  return net;
}

Circuit qaoa_maxcut_circuit(const Graph& g, const QaoaOptions& o) {
  if (g.n() < 2) throw ParameterError("QAOA needs a graph with at least two vertices");
  if (!g.is_connected()) throw ParameterError("QAOA input graph must be connected");
  if (o.rounds < 1) throw ParameterError("QAOA needs at least one round");
  Circuit c = empty_circuit(g.n());
  const double s = 1.0 / std::sqrt(2.0);
  for (auto& st : c.initial) st = {cplx(s), cplx(s)};
  if (!o.terminal.empty()) {
    if (static_cast<int>(o.terminal.size()) != g.n()) throw ParameterError("terminal bitstring length mismatch");
    c.terminal = o.terminal;
  }
  for (int r = 0; r < o.rounds; ++r) {
    for (auto [u, v] : g.edges()) {
      std::string tag = "(" + std::to_string(u) + "," + std::to_string(v) + ") round " + std::to_string(r);
      if (o.decompose_cost) {
        c.gates.push_back({{u, v}, gates::cnot(), "cnot " + tag});
        c.gates.push_back({{v}, gates::phase(o.gamma), "phase " + tag});
        c.gates.push_back({{u, v}, gates::cnot(), "cnot " + tag});
      } else {
        c.gates.push_back({{u, v}, gates::zz_phase(o.gamma), "cost " + tag});
      }
    }
    for (int q = 0; q < g.n(); ++q)
      c.gates.push_back({{q}, gates::x_rotation(o.beta), "mixer q" + std::to_string(q) + " round " + std::to_string(r)});
  }
  return c;
}

TensorNetwork qaoa_maxcut_network(const Graph& g, const QaoaOptions& options) {
  return circuit_network(qaoa_maxcut_circuit(g, options));
}

}  // namespace tenseq
