#include "tenseq/executor.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <map>
#include <numeric>

#include <json.hpp>

#include "tenseq/errors.hpp"

namespace tenseq {

namespace {

using cplx = std::complex<double>;

std::uint64_t product(const std::vector<int>& dims) {
  std::uint64_t p = 1;
  for (int d : dims) p *= static_cast<std::uint64_t>(d);
  return p;
}

std::vector<std::uint64_t> strides_of(const std::vector<int>& dims) {
  std::vector<std::uint64_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * static_cast<std::uint64_t>(dims[i]);
  return s;
}

// Sums repeated legs of one tensor (self-loop traces).
DenseTensor trace_repeats(const DenseTensor& t) {
  std::vector<int> keep_legs;
  std::vector<int> keep_dims;
  for (std::size_t i = 0; i < t.legs.size(); ++i)
    if (std::count(t.legs.begin(), t.legs.end(), t.legs[i]) == 1) {
      keep_legs.push_back(t.legs[i]);
      keep_dims.push_back(t.dims[i]);
    }
  if (keep_legs.size() == t.legs.size()) return t;
  DenseTensor out{keep_legs, keep_dims, std::vector<cplx>(product(keep_dims), 0.0)};
  const auto in_strides = strides_of(t.dims);
  const auto out_strides = strides_of(keep_dims);
  std::vector<int> idx(t.legs.size(), 0);
  for (std::uint64_t flat = 0; flat < t.entries.size(); ++flat) {
    std::uint64_t rem = flat;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      idx[i] = static_cast<int>(rem / in_strides[i]);
      rem %= in_strides[i];
    }
    bool diagonal = true;
    std::map<int, int> value;
    for (std::size_t i = 0; i < idx.size() && diagonal; ++i) {
      auto [it, fresh] = value.emplace(t.legs[i], idx[i]);
      if (!fresh && it->second != idx[i]) diagonal = false;
    }
    if (!diagonal) continue;
    std::uint64_t o = 0;
    for (std::size_t k = 0; k < keep_legs.size(); ++k)
      o += static_cast<std::uint64_t>(value[keep_legs[k]]) * out_strides[k];
    out.entries[o] += t.entries[flat];
  }
  return out;
}

}  // namespace

DenseTensor contract_pair(const DenseTensor& a, const DenseTensor& b, std::uint64_t* multiply_adds) {
  DenseTensor c;
  std::vector<int> shared;
  std::vector<int> shared_dims;
  for (std::size_t i = 0; i < a.legs.size(); ++i) {
    auto it = std::find(b.legs.begin(), b.legs.end(), a.legs[i]);
    if (it == b.legs.end()) {
      c.legs.push_back(a.legs[i]);
      c.dims.push_back(a.dims[i]);
    } else {
      if (b.dims[static_cast<std::size_t>(it - b.legs.begin())] != a.dims[i])
        throw ContractViolation("leg " + std::to_string(a.legs[i]) + " has mismatched dimensions");
      shared.push_back(a.legs[i]);
      shared_dims.push_back(a.dims[i]);
    }
  }
  for (std::size_t i = 0; i < b.legs.size(); ++i)
    if (std::find(a.legs.begin(), a.legs.end(), b.legs[i]) == a.legs.end()) {
      c.legs.push_back(b.legs[i]);
      c.dims.push_back(b.dims[i]);
    }
  // Loop index: result legs then shared legs, last fastest.
  std::vector<int> loop_legs = c.legs;
  loop_legs.insert(loop_legs.end(), shared.begin(), shared.end());
  std::vector<int> loop_dims = c.dims;
  loop_dims.insert(loop_dims.end(), shared_dims.begin(), shared_dims.end());
  const auto a_strides = strides_of(a.dims);
  const auto b_strides = strides_of(b.dims);
  const auto c_strides = strides_of(c.dims);
  const std::size_t L = loop_legs.size();
  std::vector<std::uint64_t> sa(L, 0), sb(L, 0), sc(L, 0);
  for (std::size_t k = 0; k < L; ++k) {
    for (std::size_t i = 0; i < a.legs.size(); ++i)
      if (a.legs[i] == loop_legs[k]) sa[k] = a_strides[i];
    for (std::size_t i = 0; i < b.legs.size(); ++i)
      if (b.legs[i] == loop_legs[k]) sb[k] = b_strides[i];
    if (k < c.legs.size()) sc[k] = c_strides[k];
  }
  c.entries.assign(product(c.dims), 0.0);
  std::vector<int> idx(L, 0);
  std::uint64_t ia = 0, ib = 0, ic = 0, count = 0;
  const std::uint64_t total = product(loop_dims);
  for (std::uint64_t step = 0; step < total; ++step) {
    c.entries[ic] += a.entries[ia] * b.entries[ib];
    ++count;
    for (std::size_t k = L; k-- > 0;) {
      if (++idx[k] < loop_dims[k]) {
        ia += sa[k];
        ib += sb[k];
        ic += sc[k];
        break;
      }
      const auto back = static_cast<std::uint64_t>(loop_dims[k] - 1);
      ia -= back * sa[k];
      ib -= back * sb[k];
      ic -= back * sc[k];
      idx[k] = 0;
    }
  }
  if (multiply_adds) *multiply_adds = count;
  return c;
}

ContractResult contract_all(const TensorNetwork& net, const std::vector<int>& wire_order, const ExecuteOptions& opt) {
  if (!net.open_legs().empty()) throw ContractViolation("network has open legs; amplitude closure required");
  const auto start = std::chrono::steady_clock::now();
  const int n = net.vertex_count();
  std::vector<DenseTensor> tensor(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const auto& slot = net.vertex(v);
    if (slot.entries.empty()) throw ContractViolation("tensor " + std::to_string(v) + " has no entries");
    std::vector<int> expect;
    for (std::size_t wi : net.incident(v)) {
      const Wire& w = net.wires()[wi];
      expect.push_back(w.id);
      if (w.u == w.v) expect.push_back(w.id);
    }
    std::vector<int> got = slot.legs;
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    if (got != expect) throw ContractViolation("tensor " + std::to_string(v) + " legs do not match its wires");
    DenseTensor t;
    t.legs = slot.legs;
    for (int leg : slot.legs) t.dims.push_back(net.wire(leg).dim);
    if (product(t.dims) != slot.entries.size())
      throw ContractViolation("tensor " + std::to_string(v) + " entry count differs from leg dimensions");
    t.entries = slot.entries;
    tensor[static_cast<std::size_t>(v)] = trace_repeats(t);
  }
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  ContractResult res;
  std::vector<char> seen(net.wire_count(), 0);
  for (std::size_t s = 0; s < wire_order.size(); ++s) {
    const int id = wire_order[s];
    const std::size_t wi = net.wire_index(id);
    if (seen[wi]) throw ContractViolation("wire " + std::to_string(id) + " listed twice");
    seen[wi] = 1;
    const Wire& w = net.wires()[wi];
    int a = find(w.u);
    int b = find(w.v);
    if (a == b) continue;
    auto& ta = tensor[static_cast<std::size_t>(a)];
    auto& tb = tensor[static_cast<std::size_t>(b)];
    std::uint64_t out_entries = 1;
    std::vector<int> distinct = ta.legs;
    for (std::size_t i = 0; i < tb.legs.size(); ++i)
      if (std::find(ta.legs.begin(), ta.legs.end(), tb.legs[i]) == ta.legs.end()) {
        distinct.push_back(tb.legs[i]);
        out_entries *= static_cast<std::uint64_t>(tb.dims[i]);
      }
    for (std::size_t i = 0; i < ta.legs.size(); ++i)
      if (std::find(tb.legs.begin(), tb.legs.end(), ta.legs[i]) == tb.legs.end())
        out_entries *= static_cast<std::uint64_t>(ta.dims[i]);
    if (out_entries > opt.memory_cap)
      throw ResourceError("step " + std::to_string(s) + " (wire " + std::to_string(id) + "): intermediate tensor of " +
                          std::to_string(out_entries) + " entries exceeds the cap of " +
                          std::to_string(opt.memory_cap));
    StepTrace st;
    st.wire = id;
    st.tensor_a = a;
    st.tensor_b = b;
    st.indices = static_cast<int>(distinct.size());
    st.degree = st.indices - 1;
    DenseTensor merged = contract_pair(ta, tb, &st.multiply_adds);
    st.result_rank = static_cast<int>(merged.legs.size());
    ta = DenseTensor{};
    tb = std::move(merged);
    parent[static_cast<std::size_t>(a)] = b;
    res.trace.max_rank = std::max(res.trace.max_rank, st.degree);
    res.trace.max_result_rank = std::max(res.trace.max_result_rank, st.result_rank);
    res.trace.total_multiply_adds += st.multiply_adds;
    res.trace.steps.push_back(st);
  }
  res.amplitude = 1.0;
  for (int v = 0; v < n; ++v) {
    if (find(v) != v) continue;
    const auto& t = tensor[static_cast<std::size_t>(v)];
    if (!t.legs.empty())
      throw ContractViolation("sequence leaves wire " + std::to_string(t.legs.front()) + " uncontracted");
    res.amplitude *= t.entries.at(0);
  }
  res.trace.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

ContractResult contract_all(const TensorNetwork& net, const ContractionSequence& seq, const ExecuteOptions& options) {
  return contract_all(net, seq.steps, options);
}

std::complex<double> statevector_oracle(const TensorNetwork& net) {
  std::map<int, std::array<cplx, 2>> initial;
  std::map<int, std::array<cplx, 2>> bra;
  std::vector<int> gate_vertices;
  for (int v = 0; v < net.vertex_count(); ++v) {
    const auto& s = net.vertex(v);
    if (s.entries.empty()) throw ContractViolation("circuit tensor " + std::to_string(v) + " has no entries");
    if (s.role == Role::state || s.role == Role::projector) {
      if (s.qubits.size() != 1 || s.entries.size() != 2)
        throw ContractViolation("state and projector tensors act on one qubit");
      auto& slot = s.role == Role::state ? initial : bra;
      if (!slot.emplace(s.qubits[0], std::array<cplx, 2>{s.entries[0], s.entries[1]}).second)
        throw ContractViolation("qubit " + std::to_string(s.qubits[0]) + " has two boundary tensors of one kind");
    } else if (s.role == Role::gate) {
      gate_vertices.push_back(v);
    } else {
      throw ContractViolation("tensor " + std::to_string(v) + " is not a circuit tensor");
    }
  }
  const int nq = static_cast<int>(initial.size());
  if (nq > 20) throw RefusalError("state-vector oracle is limited to 20 qubits");
  for (int q = 0; q < nq; ++q)
    if (!initial.count(q) || !bra.count(q)) throw ContractViolation("qubits must be 0..n-1 with state and projector");
  std::stable_sort(gate_vertices.begin(), gate_vertices.end(),
                   [&](int x, int y) { return net.vertex(x).layer < net.vertex(y).layer; });
  // Qubit q is bit (nq - 1 - q) of the basis index.
  const std::size_t dim = std::size_t{1} << nq;
  std::vector<cplx> psi(dim, 1.0);
  for (std::size_t x = 0; x < dim; ++x)
    for (int q = 0; q < nq; ++q) psi[x] *= initial[q][(x >> (nq - 1 - q)) & 1U];
  for (int v : gate_vertices) {
    const auto& s = net.vertex(v);
    const std::size_t m = s.qubits.size();
    const std::size_t gd = std::size_t{1} << m;
    if (s.entries.size() != gd * gd) throw ContractViolation("gate entry count mismatch");
    std::vector<cplx> next(dim, 0.0);
    for (std::size_t x = 0; x < dim; ++x) {
      if (psi[x] == cplx(0.0)) continue;
      std::size_t in = 0;
      std::size_t cleared = x;
      for (std::size_t a = 0; a < m; ++a) {
        const int bit = nq - 1 - s.qubits[a];
        in = (in << 1) | ((x >> bit) & 1U);
        cleared &= ~(std::size_t{1} << bit);
      }
      for (std::size_t out = 0; out < gd; ++out) {
        const cplx amp = s.entries[in * gd + out];
        if (amp == cplx(0.0)) continue;
        std::size_t y = cleared;
        for (std::size_t a = 0; a < m; ++a)
          if ((out >> (m - 1 - a)) & 1U) y |= std::size_t{1} << (nq - 1 - s.qubits[a]);
        next[y] += amp * psi[x];
      }
    }
    psi = std::move(next);
  }
  cplx amp = 0.0;
  for (std::size_t x = 0; x < dim; ++x) {
    cplx w = psi[x];
    for (int q = 0; q < nq; ++q) w *= bra[q][(x >> (nq - 1 - q)) & 1U];
    amp += w;
  }
  return amp;
}

std::string write_trace_json(const ContractResult& r, int indent) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.trace.steps)
    steps.push_back({{"wire", s.wire},
                     {"merged", {s.tensor_a, s.tensor_b}},
                     {"indices", s.indices},
                     {"degree", s.degree},
                     {"result_rank", s.result_rank},
                     {"multiply_adds", s.multiply_adds}});
  nlohmann::json j = {{"amplitude", {r.amplitude.real(), r.amplitude.imag()}},
                      {"max_rank", r.trace.max_rank},
                      {"max_result_rank", r.trace.max_result_rank},
                      {"multiply_adds", r.trace.total_multiply_adds},
                      {"wall_ms", r.trace.wall_ms},
                      {"steps", steps}};
  return j.dump(indent);
}

}  // namespace tenseq
